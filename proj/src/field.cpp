#include "lgtrap/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lgtrap/numeric.hpp"

namespace lgtrap {

namespace {

double factorial_ratio_sqrt(int n_r, int abs_m) {
    // sqrt(n_r! / (n_r + |M|)!)
    double v = 1.0;
    for (int k = n_r + 1; k <= n_r + abs_m; ++k) v /= static_cast<double>(k);
    return std::sqrt(v);
}

}  // namespace

TrapWavefunction::TrapWavefunction(int N_, int M_, double r0_) : N(N_), M(M_), r0(r0_) {
    if (N < 0) throw std::invalid_argument("TrapWavefunction: N must be nonnegative");
    if (std::abs(M) > N || (N - std::abs(M)) % 2 != 0)
        throw std::invalid_argument("TrapWavefunction: need |M| <= N and M = N (mod 2)");
    if (!(r0 > 0.0)) throw std::invalid_argument("TrapWavefunction: r0 must be positive");
}

QuadratureGrid QuadratureGrid::build(double r_max, int radial_count, int azimuthal_count) {
    if (!(r_max > 0.0)) throw std::invalid_argument("QuadratureGrid: r_max must be positive");
    if (radial_count < 2 || azimuthal_count < 2)
        throw std::invalid_argument("QuadratureGrid: need at least two nodes per direction");
    QuadratureGrid g;
    auto [x, w] = num::gauss_legendre(radial_count, 0.0, r_max);
    g.radial_nodes = std::move(x);
    g.radial_weights = std::move(w);
    g.azimuthal_count = azimuthal_count;
    g.r_max = r_max;
    return g;
}

double QuadratureGrid::default_r_max(double r0, double waist) {
    return 8.0 * std::max(r0, waist);
}

std::complex<double> eval_lg_mode(const LGModeSpec& spec, double R, double Phi) {
    if (R < 0.0) throw std::invalid_argument("eval_lg_mode: negative radius");
    const int al = std::abs(spec.l);
    const double x = R / spec.waist;
    const double radial = std::pow(x, al) * std::exp(-x * x);
    return spec.amplitude * radial * std::polar(1.0, spec.l * Phi);
}

double trap_radial_profile(const TrapWavefunction& wf, double R) {
    const int am = std::abs(wf.M);
    const int n_r = (wf.N - am) / 2;  // radial quantum number = min(n_plus, n_minus)
    const double x = R / wf.r0;
    const double x2 = x * x;
    const double norm = factorial_ratio_sqrt(n_r, am) / (wf.r0 * std::sqrt(M_PI));
    const double sign = (n_r % 2 == 0) ? 1.0 : -1.0;  // ladder-built phase convention
    return sign * norm * std::pow(x, am) * std::assoc_laguerre(static_cast<unsigned>(n_r),
                                                               static_cast<unsigned>(am), x2) *
           std::exp(-0.5 * x2);
}

std::complex<double> eval_trap_wavefunction(const TrapWavefunction& wf, double R, double Phi) {
    if (R < 0.0) throw std::invalid_argument("eval_trap_wavefunction: negative radius");
    return trap_radial_profile(wf, R) * std::polar(1.0, wf.M * Phi);
}

std::complex<double> ModeTruncation::eval_leading(const LGModeSpec& spec, double R,
                                                  double Phi) const {
    const double x = R / spec.waist;
    return spec.amplitude * std::pow(x, leading_power) * std::polar(1.0, spec.l * Phi);
}

double ModeTruncation::relative_error(const LGModeSpec& spec, double R) const {
    const double x2 = (R / spec.waist) * (R / spec.waist);
    return 1.0 - std::exp(-x2);
}

ModeTruncation truncate_mode(const LGModeSpec& spec) {
    return ModeTruncation{std::abs(spec.l), -1.0};
}

CouplingResult coupling_element_quadrature(const TrapWavefunction& bra,
                                           const TrapWavefunction& ket, const LGModeSpec& spec,
                                           const QuadratureGrid& grid, bool truncated) {
    const int al = std::abs(spec.l);
    const std::size_t nr = grid.radial_nodes.size();
    const int na = grid.azimuthal_count;
    const double dphi = 2.0 * M_PI / na;

    // Angular integral of exp(i*(M_ket + l - M_bra)*Phi) by uniform trapezoid;
    // exact (up to rounding) whenever |harmonic| < azimuthal_count.
    const int harmonic = ket.M + spec.l - bra.M;
    std::complex<double> angular(0.0, 0.0);
    for (int k = 0; k < na; ++k) angular += std::polar(1.0, harmonic * (k * dphi));
    angular *= dphi;

    // Radial integral of f_bra(R) * (R/w)^|l| * [exp(-R^2/w^2)] * f_ket(R) * R.
    std::complex<double> radial(0.0, 0.0);
    double tail_mass = 0.0;
    const std::size_t tail_start = nr - std::max<std::size_t>(2, nr / 50);
    for (std::size_t i = 0; i < nr; ++i) {
        const double R = grid.radial_nodes[i];
        const double x = R / spec.waist;
        double mode = std::pow(x, al);
        if (!truncated) mode *= std::exp(-x * x);
        const double term = grid.radial_weights[i] * R * trap_radial_profile(bra, R) * mode *
                            trap_radial_profile(ket, R);
        radial += term;
        if (i >= tail_start) tail_mass += std::abs(term);
    }

    CouplingResult out;
    out.value = radial * angular;
    // Absolute integrand mass on the outermost nodes; large values mean the
    // domain cut off the integrand and the result cannot be trusted.
    out.tail_estimate = tail_mass * 2.0 * M_PI;
    return out;
}

}  // namespace lgtrap
