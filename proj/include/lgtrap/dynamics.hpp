#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lgtrap/composite.hpp"

namespace lgtrap {

// Beam drive addressing one internal transition. All frequencies are in
// units of the trap frequency, times in inverse trap units, hbar = 1.
// The carrier sits detuning units above the |l|-th sideband below the
// transition: omega = gap - |l| + detuning.
struct DriveSpec {
    int l = -1;               // beam orbital index; sign = handedness
    double rabi = 1.0;        // Omega > 0
    double phase = 0.0;       // phi, radians
    double eta = 0.1;         // trap size over beam waist, > 0
    double detuning = 0.0;    // delta, offset from the sideband
    int transition = 0;       // which ladder gap the carrier references

    double carrier_frequency(const InternalLadder& ladder) const;
    // eta^|l| * Omega, the strength of the kept sideband coupling.
    double sideband_coupling() const;
    // Resolved-sideband treatment is questionable beyond this point.
    bool rwa_flagged() const { return sideband_coupling() >= 0.1; }
};

enum class EvolutionModel { RWA, FULL };

// One entry of a pulse program. The rotation half-angle theta = eta^|l| *
// Omega * t / 2 parameterizes duration, so theta = pi/2 is a full transfer
// ("pi pulse") and theta = pi/4 an equal-weight beamsplitter.
struct PulseStep {
    DriveSpec drive;
    std::optional<double> area;      // theta, radians
    std::optional<double> duration;  // explicit time, used when area is absent
    EvolutionModel model = EvolutionModel::RWA;

    double resolved_duration() const;
    double resolved_area() const;
};

// Sideband-resonant coupling after dropping all counter-rotating terms:
//   H = -(1/2) eta^|l| Omega [ e^{-i phi} A sigma_k^dag
//                            + e^{+i phi} A^dag sigma_k ] + delta sigma_k^dag sigma_k
// with A = a_-^|l| for l > 0, a_+^|l| for l < 0 and the identity for l = 0.
// The phase convention is fixed so that phi = -pi/2 makes a theta = pi/2
// pulse map the upper internal level onto the co-rotating trap quantum with
// amplitude +1. Couplings with |l| > n_max are identically zero.
OperatorMatrix build_rwa_hamiltonian(const CompositeBasis& basis, const DriveSpec& drive,
                                     int transition);

// Complete interaction-picture Hamiltonian at time t: the binomial expansion
// of (a_raise e^{i t} + a_lower e^{-i t})^|l| over every ladder transition,
// each with its phase exp(i (gap_k - omega) t), plus the conjugate
// (counter-rotating) part. Per-transition Rabi frequencies follow the dipole
// metadata when present, otherwise they are all equal.
OperatorMatrix build_full_hamiltonian(const CompositeBasis& basis, const DriveSpec& drive,
                                      double t);

// Precomputed monomial decomposition of the full Hamiltonian; lets the
// integrator assemble H(t)psi without rebuilding matrices.
class FullHamiltonian {
public:
    FullHamiltonian(const CompositeBasis& basis, const DriveSpec& drive);

    Eigen::Index dim() const { return m_dim; }
    const std::string& basis_tag() const { return m_tag; }

    OperatorMatrix at(double t) const;
    // out = -i H(t) psi
    void rhs(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const;

private:
    struct Entry {
        Eigen::Index row, col;
        std::complex<double> value;
    };
    struct Term {
        std::vector<Entry> entries;  // raising-side monomial, at most one per column
        std::complex<double> coeff;
        double frequency;
    };
    std::vector<Term> m_terms;
    Eigen::Index m_dim = 0;
    std::string m_tag;
};

// Exact propagation by eigendecomposition of a (time-independent) Hermitian
// Hamiltonian; cache it when a trajectory needs many sample times.
class RwaPropagator {
public:
    RwaPropagator(const OperatorMatrix& hamiltonian, const StateVector& initial);
    StateVector at(double t) const;

private:
    std::string m_tag;
    Eigen::VectorXd m_eigenvalues;
    Eigen::MatrixXcd m_eigenvectors;
    Eigen::VectorXcd m_projected;  // V^dag psi0
};

StateVector evolve_rwa(const StateVector& state, const OperatorMatrix& hamiltonian,
                       double duration);

struct IntegratorOptions {
    double tolerance = 1e-10;  // absolute and relative
    double max_step = std::numeric_limits<double>::infinity();
};

struct TrajectorySample {
    double t;
    Eigen::VectorXcd amplitudes;
};

struct FullEvolution {
    StateVector final_state;
    std::vector<TrajectorySample> samples;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double norm_drift = 0.0;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) integration of
// i d/dt psi = H(t) psi from t0 to t1, stopping exactly at each requested
// sample time. Norm drift beyond 10x tolerance or step-size underflow throws
// NumericalError.
FullEvolution evolve_full(const StateVector& state, const CompositeBasis& basis,
                          const DriveSpec& drive, double t0, double t1,
                          std::span<const double> sample_times,
                          const IntegratorOptions& options = {});

struct StepRecord {
    int index = 0;
    EvolutionModel model = EvolutionModel::RWA;
    double duration = 0.0;
    double area = 0.0;
    double exp_trap_lz = 0.0;      // <L_Z> in hbar
    double exp_internal_lz = 0.0;  // <l_z> in hbar
    double exp_total_quanta = 0.0; // <N>
    std::vector<double> level_populations;
    double norm = 1.0;
    std::optional<double> rwa_infidelity;  // FULL steps: 1 - |<psi_RWA|psi_FULL>|^2
};

struct SchedulePoint {
    double t;  // absolute time across the whole schedule
    Eigen::VectorXcd amplitudes;
};

struct ScheduleResult {
    StateVector final_state;
    std::vector<StepRecord> records;
    std::vector<SchedulePoint> trajectory;
};

struct ScheduleOptions {
    IntegratorOptions integrator;
    int samples_per_step = 0;          // uniform in-step sampling when > 0
    std::vector<double> sample_times;  // absolute times; overrides samples_per_step
    bool record_rwa_infidelity = true; // for FULL steps
};

// Applies the pulse program sequentially, recording angular-momentum
// bookkeeping and populations after each step.
ScheduleResult run_schedule(const CompositeBasis& basis, const StateVector& initial,
                            std::span<const PulseStep> steps, const ScheduleOptions& options = {});

// Cached lifted observables for trajectory reporting.
struct ObservableSet {
    OperatorMatrix trap_lz;
    OperatorMatrix internal_lz;
    OperatorMatrix total_quanta;

    explicit ObservableSet(const CompositeBasis& basis);
};

}  // namespace lgtrap
