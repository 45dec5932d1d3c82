#pragma once

#include <vector>

#include "lgtrap/composite.hpp"
#include "lgtrap/dynamics.hpp"
#include "lgtrap/field.hpp"

namespace lgtrap {

enum class Subsystem { Internal, Trap };
enum class EntropyBase { Bits, Nats };

struct ReducedDensity {
    Subsystem subsystem;
    Eigen::MatrixXcd matrix;  // Hermitian, unit trace, positive semidefinite
};

ReducedDensity partial_trace(const StateVector& state, const CompositeBasis& basis,
                             Subsystem keep);

// Re tr(rho^2)
double purity(const ReducedDensity& rho);

// -sum lambda log(lambda) over the eigenvalues, 0 log 0 := 0. Eigenvalues
// below -1e-10 are rejected.
double entanglement_entropy(const ReducedDensity& rho, EntropyBase base = EntropyBase::Bits);

struct SchmidtDecomposition {
    Eigen::VectorXd coefficients;      // descending, nonnegative
    Eigen::MatrixXcd internal_vectors; // columns, orthonormal
    Eigen::MatrixXcd trap_vectors;     // columns, orthonormal
};

SchmidtDecomposition schmidt(const StateVector& state, const CompositeBasis& basis);

struct MomentumOptions {
    int points = 256;
    double p_max = 0.0;  // <= 0: choose from the state's momentum-space extent
};

// Probability density of the released state over a square momentum grid.
// values(i, j) is the density at (p_x(i), p_y(j)); axis(k) the grid
// coordinates. raw_integral is the grid integral before normalization (the
// total-probability check); values are stored normalized to unit integral.
struct MomentumDistribution {
    Eigen::VectorXd axis;
    Eigen::MatrixXd values;
    double p_max = 0.0;
    double raw_integral = 0.0;
    double density_at_origin = 0.0;
};

MomentumDistribution momentum_distribution(const TrapWavefunction& wf, const QuadratureGrid& grid,
                                           const MomentumOptions& options = {});

struct ProbeBranch {
    FockLabel trap;
    double initial_population = 0.0;  // before the probe, summed over levels
    double excited_population = 0.0;  // joint with the probe's upper level, after
};

struct ProbeReport {
    int upper_level = 0;          // ladder index the probe excites into
    double total_excited = 0.0;   // population of that level after the probe
    std::vector<ProbeBranch> branches;
};

// Drives only the probe transition (carrier when probe.l == 0, sideband
// otherwise) for the given duration and reports which trap branch of the
// state absorbed. Needs at least three ladder levels.
ProbeReport probe_discrimination(const StateVector& state, const CompositeBasis& basis,
                                 const DriveSpec& probe, double duration);

}  // namespace lgtrap
