#include "lgtrap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lgtrap/errors.hpp"

namespace lgtrap {

namespace {

// Amplitudes reshaped so row = internal level, column = trap index.
Eigen::MatrixXcd amplitude_matrix(const StateVector& state, const CompositeBasis& basis) {
    if (state.basis_tag != basis.tag())
        throw std::invalid_argument("analysis: state is not on the given composite basis");
    const auto L = static_cast<Eigen::Index>(basis.internal().level_count());
    const auto T = static_cast<Eigen::Index>(basis.trap().size());
    Eigen::MatrixXcd a(L, T);
    for (Eigen::Index lev = 0; lev < L; ++lev)
        for (Eigen::Index t = 0; t < T; ++t) a(lev, t) = state.amplitudes(lev * T + t);
    return a;
}

}  // namespace

ReducedDensity partial_trace(const StateVector& state, const CompositeBasis& basis,
                             Subsystem keep) {
    const Eigen::MatrixXcd a = amplitude_matrix(state, basis);
    if (keep == Subsystem::Internal) return {keep, a * a.adjoint()};
    return {keep, a.transpose() * a.conjugate()};
}

double purity(const ReducedDensity& rho) {
    return (rho.matrix * rho.matrix).trace().real();
}

double entanglement_entropy(const ReducedDensity& rho, EntropyBase base) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix);
    if (solver.info() != Eigen::Success)
        throw NumericalError("entanglement_entropy: eigendecomposition failed");
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda < -1e-10)
            throw NumericalError("entanglement_entropy: eigenvalue " + std::to_string(lambda) +
                                 " below tolerance");
        if (lambda > 0.0) s -= lambda * std::log(lambda);
    }
    if (base == EntropyBase::Bits) s /= std::log(2.0);
    return s;
}

SchmidtDecomposition schmidt(const StateVector& state, const CompositeBasis& basis) {
    const Eigen::MatrixXcd a = amplitude_matrix(state, basis);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.coefficients = svd.singularValues();
    out.internal_vectors = svd.matrixU();
    // a = U S V^dag, so the trap-side orthonormal vectors are conj(V) columns.
    out.trap_vectors = svd.matrixV().conjugate();
    return out;
}

MomentumDistribution momentum_distribution(const TrapWavefunction& wf, const QuadratureGrid& grid,
                                           const MomentumOptions& options) {
    if (options.points < 2)
        throw std::invalid_argument("momentum_distribution: need at least a 2x2 grid");
    const int n = options.points;
    const int am = std::abs(wf.M);

    // Angular integral is exact: the transform of f(R) e^{iM Phi} is an
    // order-|M| Hankel transform of f times a pure phase, so the density is
    // isotropic: P(p) = g(|p|)^2, g(p) = int f(R) J_|M|(pR) R dR.
    const std::size_t nr = grid.radial_nodes.size();
    std::vector<double> fw(nr);
    for (std::size_t i = 0; i < nr; ++i)
        fw[i] = grid.radial_weights[i] * grid.radial_nodes[i] *
                trap_radial_profile(wf, grid.radial_nodes[i]);

    auto hankel = [&](double p) {
        double g = 0.0;
        for (std::size_t i = 0; i < nr; ++i)
            g += fw[i] * std::cyl_bessel_j(am, p * grid.radial_nodes[i]);
        return g;
    };

    MomentumDistribution out;
    out.p_max = options.p_max > 0.0
                    ? options.p_max
                    : 8.0 * std::sqrt(static_cast<double>(wf.N) + 1.0) / wf.r0;
    const double dp = 2.0 * out.p_max / n;

    out.axis.resize(n);
    for (int i = 0; i < n; ++i) out.axis(i) = (i - 0.5 * (n - 1)) * dp;

    // Radii repeat heavily across the square grid; key them on the integer
    // (2i-(n-1))^2 + (2j-(n-1))^2 so each distinct one costs one transform.
    std::map<long long, double> cache;
    out.values.resize(n, n);
    for (int i = 0; i < n; ++i) {
        const long long a = 2LL * i - (n - 1);
        for (int j = 0; j < n; ++j) {
            const long long b = 2LL * j - (n - 1);
            const long long key = a * a + b * b;
            auto it = cache.find(key);
            if (it == cache.end()) {
                const double p = 0.5 * dp * std::sqrt(static_cast<double>(key));
                const double g = hankel(p);
                it = cache.emplace(key, g * g).first;
            }
            out.values(i, j) = it->second;
        }
    }

    out.raw_integral = out.values.sum() * dp * dp;

    double edge_mass = 0.0;
    for (int i = 0; i < n; ++i)
        edge_mass += (out.values(i, 0) + out.values(i, n - 1) + out.values(0, i) +
                      out.values(n - 1, i)) *
                     dp * dp;
    if (edge_mass > 1e-6)
        throw NumericalError("momentum_distribution: " + std::to_string(edge_mass) +
                             " probability at the grid edge, extent too small (aliasing)");

    if (out.raw_integral > 0.0) out.values /= out.raw_integral;
    const double g0 = hankel(0.0);
    out.density_at_origin = g0 * g0;
    return out;
}

ProbeReport probe_discrimination(const StateVector& state, const CompositeBasis& basis,
                                 const DriveSpec& probe, double duration) {
    if (basis.internal().level_count() < 3)
        throw std::invalid_argument(
            "probe_discrimination: a two-level ladder leaves no probe transition; need at least "
            "three levels");
    if (probe.transition < 0 || probe.transition >= basis.internal().level_count() - 1)
        throw std::out_of_range("probe_discrimination: probe transition out of range");

    const auto h = build_rwa_hamiltonian(basis, probe, probe.transition);
    const StateVector after = evolve_rwa(state, h, duration);

    const auto T = basis.trap().size();
    const int upper = probe.transition + 1;

    ProbeReport report;
    report.upper_level = upper;
    for (std::size_t tau = 0; tau < T; ++tau) {
        ProbeBranch branch;
        branch.trap = basis.trap().label(tau);
        for (int lev = 0; lev < basis.internal().level_count(); ++lev)
            branch.initial_population +=
                std::norm(state.amplitudes(static_cast<Eigen::Index>(basis.index(lev, tau))));
        branch.excited_population =
            std::norm(after.amplitudes(static_cast<Eigen::Index>(basis.index(upper, tau))));
        report.total_excited += branch.excited_population;
        if (branch.initial_population > 1e-14 || branch.excited_population > 1e-14)
            report.branches.push_back(branch);
    }
    return report;
}

}  // namespace lgtrap
