#pragma once

#include <complex>
#include <string>

#include "lgtrap/fock.hpp"
#include "lgtrap/ladder.hpp"
#include "lgtrap/operator_matrix.hpp"

namespace lgtrap {

// Tensor product of the internal ladder and the trap space, internal-major:
// composite index = level * trap_size + trap_index, so the internal level
// varies slowest.
class CompositeBasis {
public:
    CompositeBasis(InternalLadder internal, FockBasis trap);

    const InternalLadder& internal() const { return m_internal; }
    const FockBasis& trap() const { return m_trap; }

    std::size_t dimension() const { return m_dim; }
    std::size_t index(int level, std::size_t trap_index) const;
    int level_of(std::size_t composite_index) const;
    std::size_t trap_index_of(std::size_t composite_index) const;

    const std::string& tag() const { return m_tag; }

    // op acting on the internal factor, identity on the trap factor.
    OperatorMatrix lift_internal(const OperatorMatrix& op) const;
    // identity on the internal factor, op acting on the trap factor.
    OperatorMatrix lift_trap(const OperatorMatrix& op) const;

private:
    InternalLadder m_internal;
    FockBasis m_trap;
    std::size_t m_dim;
    std::string m_tag;
};

// Normalized amplitude vector on a tagged basis. The norm is validated at
// construction and after every evolution step; it is never silently
// renormalized - drift beyond tolerance is an error signal.
struct StateVector {
    std::string basis_tag;
    Eigen::VectorXcd amplitudes;

    static constexpr double kNormTolerance = 1e-9;

    static StateVector create(std::string tag, Eigen::VectorXcd amps);
    // Single basis state.
    static StateVector basis_state(const CompositeBasis& basis, int level, const FockLabel& trap);

    double norm() const { return amplitudes.norm(); }
    void check_norm(double tol = kNormTolerance) const;
};

std::complex<double> expectation(const OperatorMatrix& op, const StateVector& psi);
std::complex<double> overlap(const StateVector& bra, const StateVector& ket);
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace lgtrap
