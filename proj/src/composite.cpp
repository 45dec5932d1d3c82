#include "lgtrap/composite.hpp"

#include <cmath>
#include <stdexcept>

#include "lgtrap/errors.hpp"

namespace lgtrap {

CompositeBasis::CompositeBasis(InternalLadder internal, FockBasis trap)
    : m_internal(std::move(internal)), m_trap(std::move(trap)) {
    m_dim = static_cast<std::size_t>(m_internal.level_count()) * m_trap.size();
    m_tag = m_internal.tag() + "%" + m_trap.tag();
}

std::size_t CompositeBasis::index(int level, std::size_t trap_index) const {
    if (level < 0 || level >= m_internal.level_count())
        throw std::out_of_range("CompositeBasis::index: level out of range");
    if (trap_index >= m_trap.size())
        throw std::out_of_range("CompositeBasis::index: trap index out of range");
    return static_cast<std::size_t>(level) * m_trap.size() + trap_index;
}

int CompositeBasis::level_of(std::size_t composite_index) const {
    return static_cast<int>(composite_index / m_trap.size());
}

std::size_t CompositeBasis::trap_index_of(std::size_t composite_index) const {
    return composite_index % m_trap.size();
}

OperatorMatrix CompositeBasis::lift_internal(const OperatorMatrix& op) const {
    if (op.basis_tag != m_internal.tag())
        throw std::invalid_argument("lift_internal: operator is not on the internal basis");
    const auto T = static_cast<Eigen::Index>(m_trap.size());
    auto out = OperatorMatrix::zero(m_tag, static_cast<Eigen::Index>(m_dim));
    for (Eigen::Index i = 0; i < op.dim(); ++i)
        for (Eigen::Index j = 0; j < op.dim(); ++j) {
            const std::complex<double> v = op.mat(i, j);
            if (v == std::complex<double>(0.0)) continue;
            for (Eigen::Index t = 0; t < T; ++t) out.mat(i * T + t, j * T + t) = v;
        }
    return out;
}

OperatorMatrix CompositeBasis::lift_trap(const OperatorMatrix& op) const {
    if (op.basis_tag != m_trap.tag())
        throw std::invalid_argument("lift_trap: operator is not on the trap basis");
    const auto T = static_cast<Eigen::Index>(m_trap.size());
    const auto L = static_cast<Eigen::Index>(m_internal.level_count());
    auto out = OperatorMatrix::zero(m_tag, static_cast<Eigen::Index>(m_dim));
    for (Eigen::Index k = 0; k < L; ++k) out.mat.block(k * T, k * T, T, T) = op.mat;
    return out;
}

StateVector StateVector::create(std::string tag, Eigen::VectorXcd amps) {
    StateVector s{std::move(tag), std::move(amps)};
    s.check_norm();
    return s;
}

StateVector StateVector::basis_state(const CompositeBasis& basis, int level,
                                     const FockLabel& trap) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(static_cast<Eigen::Index>(basis.index(level, basis.trap().index_of(trap)))) = 1.0;
    return {basis.tag(), std::move(v)};
}

void StateVector::check_norm(double tol) const {
    const double n = norm();
    if (std::abs(n - 1.0) > tol)
        throw NumericalError("state norm drifted to " + std::to_string(n) +
                             " (tolerance " + std::to_string(tol) + ")");
}

std::complex<double> expectation(const OperatorMatrix& op, const StateVector& psi) {
    if (op.basis_tag != psi.basis_tag)
        throw std::invalid_argument("expectation: basis mismatch");
    return psi.amplitudes.dot(op.mat * psi.amplitudes);
}

std::complex<double> overlap(const StateVector& bra, const StateVector& ket) {
    if (bra.basis_tag != ket.basis_tag)
        throw std::invalid_argument("overlap: basis mismatch");
    return bra.amplitudes.dot(ket.amplitudes);
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(overlap(a, b));
}

}  // namespace lgtrap
