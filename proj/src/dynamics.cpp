#include "lgtrap/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lgtrap/errors.hpp"

namespace lgtrap {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// Trap-side lowering monomial kept by the sideband resonance: a_+ for l < 0,
// a_- for l > 0 (the quanta co-rotating with the beam phase are exchanged).
OperatorMatrix sideband_lowering(const FockBasis& trap, int l) {
    if (l == 0) return OperatorMatrix::identity(trap.tag(), static_cast<Eigen::Index>(trap.size()));
    const auto a = (l < 0) ? annihilate_plus(trap) : annihilate_minus(trap);
    return matrix_power(a, std::abs(l));
}

std::vector<double> per_transition_rabi(const InternalLadder& ladder, const DriveSpec& drive) {
    std::vector<double> rabi(static_cast<std::size_t>(ladder.level_count() - 1), drive.rabi);
    if (ladder.dipole_scales()) {
        const auto& d = *ladder.dipole_scales();
        const double ref = d.at(static_cast<std::size_t>(drive.transition));
        for (std::size_t k = 0; k < rabi.size(); ++k) rabi[k] = drive.rabi * d[k] / ref;
    }
    return rabi;
}

}  // namespace

double DriveSpec::carrier_frequency(const InternalLadder& ladder) const {
    return ladder.gap(transition) - std::abs(l) + detuning;
}

double DriveSpec::sideband_coupling() const {
    return std::pow(eta, std::abs(l)) * rabi;
}

double PulseStep::resolved_duration() const {
    if (duration) return *duration;
    if (!area) throw std::invalid_argument("PulseStep: neither area nor duration given");
    return 2.0 * (*area) / drive.sideband_coupling();
}

double PulseStep::resolved_area() const {
    if (area) return *area;
    return drive.sideband_coupling() * resolved_duration() / 2.0;
}

OperatorMatrix build_rwa_hamiltonian(const CompositeBasis& basis, const DriveSpec& drive,
                                     int transition) {
    const auto sigma = lowering_operator(basis.internal(), transition);
    const auto lowered = basis.lift_trap(sideband_lowering(basis.trap(), drive.l));
    const auto raise_internal = basis.lift_internal(sigma.dagger());

    const double g = 0.5 * drive.sideband_coupling();
    Eigen::MatrixXcd coupling =
        -g * std::polar(1.0, -drive.phase) * (lowered.mat * raise_internal.mat);
    Eigen::MatrixXcd h = coupling + coupling.adjoint();

    if (drive.detuning != 0.0) {
        const auto upper = basis.lift_internal(sigma.dagger() * sigma);
        h += drive.detuning * upper.mat;
    }
    return {basis.tag(), std::move(h)};
}

FullHamiltonian::FullHamiltonian(const CompositeBasis& basis, const DriveSpec& drive) {
    m_dim = static_cast<Eigen::Index>(basis.dimension());
    m_tag = basis.tag();

    const int al = std::abs(drive.l);
    const double omega = drive.carrier_frequency(basis.internal());
    const auto rabi = per_transition_rabi(basis.internal(), drive);
    const double eta_pow = std::pow(drive.eta, al);

    const auto& trap = basis.trap();
    const auto raising =
        (drive.l < 0) ? annihilate_minus(trap).dagger() : annihilate_plus(trap).dagger();
    const auto lowering = (drive.l < 0) ? annihilate_plus(trap) : annihilate_minus(trap);

    for (int k = 0; k < basis.internal().level_count() - 1; ++k) {
        const auto raise_k = basis.lift_internal(lowering_operator(basis.internal(), k).dagger());
        const double detail = basis.internal().gap(k) - omega;
        for (int j = 0; j <= al; ++j) {
            // (raising e^{+it})^j (lowering e^{-it})^{al-j}; factors commute.
            const auto mono =
                basis.lift_trap(matrix_power(raising, j) * matrix_power(lowering, al - j));
            const Eigen::MatrixXcd full = mono.mat * raise_k.mat;
            Term term;
            for (Eigen::Index col = 0; col < full.cols(); ++col)
                for (Eigen::Index row = 0; row < full.rows(); ++row)
                    if (full(row, col) != std::complex<double>(0.0))
                        term.entries.push_back({row, col, full(row, col)});
            term.coeff = -0.5 * eta_pow * rabi[static_cast<std::size_t>(k)] * binomial(al, j) *
                         std::polar(1.0, -drive.phase);
            term.frequency = (2.0 * j - al) + detail;
            m_terms.push_back(std::move(term));
        }
    }
}

OperatorMatrix FullHamiltonian::at(double t) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m_dim, m_dim);
    for (const auto& term : m_terms) {
        const std::complex<double> c = term.coeff * std::polar(1.0, term.frequency * t);
        for (const auto& e : term.entries) {
            h(e.row, e.col) += c * e.value;
            h(e.col, e.row) += std::conj(c * e.value);
        }
    }
    return {m_tag, std::move(h)};
}

void FullHamiltonian::rhs(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const {
    out.setZero(psi.size());
    for (const auto& term : m_terms) {
        const std::complex<double> c = term.coeff * std::polar(1.0, term.frequency * t);
        const std::complex<double> cc = std::conj(c);
        for (const auto& e : term.entries) {
            out(e.row) += c * e.value * psi(e.col);
            out(e.col) += cc * std::conj(e.value) * psi(e.row);
        }
    }
    out *= -kI;
}

OperatorMatrix build_full_hamiltonian(const CompositeBasis& basis, const DriveSpec& drive,
                                      double t) {
    return FullHamiltonian(basis, drive).at(t);
}

RwaPropagator::RwaPropagator(const OperatorMatrix& hamiltonian, const StateVector& initial) {
    if (hamiltonian.basis_tag != initial.basis_tag)
        throw std::invalid_argument("RwaPropagator: basis mismatch");
    if (!hamiltonian.is_hermitian(1e-12))
        throw std::invalid_argument("RwaPropagator: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian.mat);
    if (solver.info() != Eigen::Success)
        throw NumericalError("RwaPropagator: eigendecomposition failed");
    m_tag = hamiltonian.basis_tag;
    m_eigenvalues = solver.eigenvalues();
    m_eigenvectors = solver.eigenvectors();
    m_projected = m_eigenvectors.adjoint() * initial.amplitudes;
}

StateVector RwaPropagator::at(double t) const {
    Eigen::VectorXcd phased(m_projected.size());
    for (Eigen::Index i = 0; i < m_projected.size(); ++i)
        phased(i) = std::polar(1.0, -m_eigenvalues(i) * t) * m_projected(i);
    StateVector out{m_tag, m_eigenvectors * phased};
    out.check_norm();
    return out;
}

StateVector evolve_rwa(const StateVector& state, const OperatorMatrix& hamiltonian,
                       double duration) {
    return RwaPropagator(hamiltonian, state).at(duration);
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,         500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84,   0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

FullEvolution evolve_full(const StateVector& state, const CompositeBasis& basis,
                          const DriveSpec& drive, double t0, double t1,
                          std::span<const double> sample_times, const IntegratorOptions& options) {
    if (state.basis_tag != basis.tag())
        throw std::invalid_argument("evolve_full: state is not on the given composite basis");
    if (!(options.tolerance > 0.0))
        throw std::invalid_argument("evolve_full: tolerance must be positive");
    if (t1 < t0) throw std::invalid_argument("evolve_full: t1 must be >= t0");

    std::vector<double> events(sample_times.begin(), sample_times.end());
    std::sort(events.begin(), events.end());
    for (double ts : events)
        if (ts < t0 || ts > t1)
            throw std::invalid_argument("evolve_full: sample time outside the integration span");

    const FullHamiltonian ham(basis, drive);
    FullEvolution result;

    Eigen::VectorXcd y = state.amplitudes;
    double t = t0;
    std::size_t next_event = 0;

    // Events within floating-point noise of the current time are emitted from
    // the current state; keeps duplicate or nearly-coincident sample times
    // from forcing absurdly small steps.
    auto emit_events_at = [&](double time) {
        const double snap = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max({1.0, std::abs(time), std::abs(t1)});
        while (next_event < events.size() && events[next_event] <= time + snap) {
            result.samples.push_back({events[next_event], y});
            ++next_event;
        }
    };
    emit_events_at(t);

    const double span = t1 - t0;
    if (span == 0.0) {
        result.final_state = StateVector{state.basis_tag, std::move(y)};
        return result;
    }

    const Eigen::Index dim = y.size();
    std::array<Eigen::VectorXcd, 7> k;
    for (auto& ki : k) ki.resize(dim);
    Eigen::VectorXcd ytmp(dim), y5(dim), y4(dim);

    ham.rhs(t, y, k[0]);
    double h = std::min({options.max_step, span, 0.1 / (1.0 + k[0].norm())});
    if (h <= 0.0) h = std::numeric_limits<double>::epsilon();

    const double tol = options.tolerance;
    bool fsal_valid = true;

    while (t < t1) {
        double target = t1;
        if (next_event < events.size()) target = std::min(target, events[next_event]);
        double step = std::min({h, options.max_step, target - t});
        if (step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw NumericalError("evolve_full: step size underflow at t = " + std::to_string(t));

        if (!fsal_valid) ham.rhs(t, y, k[0]);

        for (int s = 1; s < 7; ++s) {
            ytmp = y;
            for (int j = 0; j < s; ++j)
                if (kA[s][j] != 0.0) ytmp.noalias() += (step * kA[s][j]) * k[j];
            ham.rhs(t + kC[s] * step, ytmp, k[s]);
        }

        y5 = y;
        y4 = y;
        for (int s = 0; s < 7; ++s) {
            if (kB5[s] != 0.0) y5.noalias() += (step * kB5[s]) * k[s];
            if (kB4[s] != 0.0) y4.noalias() += (step * kB4[s]) * k[s];
        }

        // scaled RMS error over components; the budget is distributed per unit
        // time so the accumulated error over the span tracks the tolerance
        const double budget = std::min(step / span, 1.0);
        double err_sq = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double sc = (tol + tol * std::max(std::abs(y(i)), std::abs(y5(i)))) * budget;
            const double e = std::abs(y5(i) - y4(i)) / sc;
            err_sq += e * e;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(dim));

        if (err <= 1.0) {
            t += step;
            y.swap(y5);
            k[0] = k[6];  // first-same-as-last
            fsal_valid = true;
            ++result.accepted_steps;
            emit_events_at(t);
        } else {
            fsal_valid = false;
            ++result.rejected_steps;
        }

        // error per unit step scales as h^4 for the embedded pair
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.25), 0.2, 5.0);
        h = step * factor;
    }

    emit_events_at(t1);
    result.norm_drift = std::abs(y.norm() - 1.0);
    if (result.norm_drift > 10.0 * tol)
        throw NumericalError("evolve_full: norm drift " + std::to_string(result.norm_drift) +
                             " exceeds 10x tolerance");
    result.final_state = StateVector{state.basis_tag, std::move(y)};
    return result;
}

ObservableSet::ObservableSet(const CompositeBasis& basis)
    : trap_lz(basis.lift_trap(angular_momentum_trap(basis.trap()))),
      internal_lz(basis.lift_internal(angular_momentum_internal(basis.internal()))),
      total_quanta(basis.lift_trap([&] {
          auto [np, nm] = number_operators(basis.trap());
          return np + nm;
      }())) {}

namespace {

std::vector<double> level_populations(const CompositeBasis& basis, const Eigen::VectorXcd& amps) {
    std::vector<double> pops(static_cast<std::size_t>(basis.internal().level_count()), 0.0);
    for (Eigen::Index i = 0; i < amps.size(); ++i)
        pops[static_cast<std::size_t>(basis.level_of(static_cast<std::size_t>(i)))] +=
            std::norm(amps(i));
    return pops;
}

}  // namespace

ScheduleResult run_schedule(const CompositeBasis& basis, const StateVector& initial,
                            std::span<const PulseStep> steps, const ScheduleOptions& options) {
    if (initial.basis_tag != basis.tag())
        throw std::invalid_argument("run_schedule: initial state is not on the given basis");
    initial.check_norm();

    const ObservableSet obs(basis);
    ScheduleResult result{initial, {}, {}};

    const bool sampling = options.samples_per_step > 0 || !options.sample_times.empty();
    if (sampling) result.trajectory.push_back({0.0, initial.amplitudes});

    double t_offset = 0.0;
    StateVector current = initial;

    for (std::size_t si = 0; si < steps.size(); ++si) {
        const PulseStep& step = steps[si];
        const double duration = step.resolved_duration();

        // in-step sample times, local to [0, duration]
        std::vector<double> local;
        if (!options.sample_times.empty()) {
            for (double ts : options.sample_times)
                if (ts > t_offset && ts <= t_offset + duration) local.push_back(ts - t_offset);
        } else if (options.samples_per_step > 0) {
            for (int i = 1; i <= options.samples_per_step; ++i)
                local.push_back(duration * i / options.samples_per_step);
        }

        StateVector next = current;
        if (step.model == EvolutionModel::RWA) {
            const auto h = build_rwa_hamiltonian(basis, step.drive, step.drive.transition);
            RwaPropagator prop(h, current);
            for (double ts : local) result.trajectory.push_back({t_offset + ts, prop.at(ts).amplitudes});
            next = prop.at(duration);
        } else {
            auto evo = evolve_full(current, basis, step.drive, 0.0, duration, local,
                                   options.integrator);
            for (const auto& s : evo.samples)
                result.trajectory.push_back({t_offset + s.t, s.amplitudes});
            next = evo.final_state;
        }
        next.check_norm();

        StepRecord rec;
        rec.index = static_cast<int>(si);
        rec.model = step.model;
        rec.duration = duration;
        rec.area = step.resolved_area();
        rec.exp_trap_lz = expectation(obs.trap_lz, next).real();
        rec.exp_internal_lz = expectation(obs.internal_lz, next).real();
        rec.exp_total_quanta = expectation(obs.total_quanta, next).real();
        rec.level_populations = level_populations(basis, next.amplitudes);
        rec.norm = next.norm();
        if (step.model == EvolutionModel::FULL && options.record_rwa_infidelity) {
            const auto h = build_rwa_hamiltonian(basis, step.drive, step.drive.transition);
            const auto reference = evolve_rwa(current, h, duration);
            rec.rwa_infidelity = 1.0 - fidelity(reference, next);
        }
        result.records.push_back(std::move(rec));

        current = std::move(next);
        t_offset += duration;
    }

    result.final_state = std::move(current);
    return result;
}

}  // namespace lgtrap
