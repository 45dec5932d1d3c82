#pragma once

#include <complex>
#include <vector>

#include "lgtrap/fock.hpp"

namespace lgtrap {

// Doughnut beam profile at the waist, zero radial index:
// u(R, Phi) = amplitude * (R/waist)^|l| * exp(-R^2/waist^2 + i*l*Phi).
struct LGModeSpec {
    int l = 0;
    double waist = 10.0;
    double amplitude = 1.0;
};

// Planar-oscillator eigenstate chi_{N,M} with length scale r0. Valid when
// |M| <= N and M has the parity of N. The phase convention matches the Fock
// state with n_plus = (N+M)/2, n_minus = (N-M)/2 built by creation-operator
// ladders with positive-real amplitudes.
struct TrapWavefunction {
    int N = 0;
    int M = 0;
    double r0 = 1.0;

    TrapWavefunction(int N_, int M_, double r0_ = 1.0);
};

// Polar product rule: Gauss-Legendre in radius on [0, r_max], uniform
// trapezoid in angle (spectrally accurate for the periodic direction).
struct QuadratureGrid {
    std::vector<double> radial_nodes;
    std::vector<double> radial_weights;
    int azimuthal_count = 256;
    double r_max = 0.0;

    static QuadratureGrid build(double r_max, int radial_count = 400, int azimuthal_count = 256);
    // Tails of every Gaussian factor fall below ~1e-27 at 8 scale lengths.
    static double default_r_max(double r0, double waist);
};

std::complex<double> eval_lg_mode(const LGModeSpec& spec, double R, double Phi);

std::complex<double> eval_trap_wavefunction(const TrapWavefunction& wf, double R, double Phi);

// Radial factor f(R) such that chi(R, Phi) = f(R) * exp(i*M*Phi). Real.
double trap_radial_profile(const TrapWavefunction& wf, double R);

// Leading term of the small-radius expansion of the mode and the size of
// what is dropped. The Gaussian envelope exp(-R^2/w^2) contributes the first
// correction with coefficient -1 at relative order (R/w)^2.
struct ModeTruncation {
    int leading_power;              // |l|
    double next_order_coefficient;  // -1
    std::complex<double> eval_leading(const LGModeSpec& spec, double R, double Phi) const;
    // Relative error |u_full - u_leading| / |u_leading| at radius R (exact for
    // the Gaussian envelope: 1 - exp(-(R/w)^2), ~ (R/w)^2 for small R).
    double relative_error(const LGModeSpec& spec, double R) const;
};

ModeTruncation truncate_mode(const LGModeSpec& spec);

// <bra| u(R,Phi)/amplitude |ket> by two-dimensional quadrature; the
// independent oracle for the operator-algebra coupling elements. The
// tail_estimate reports the integrand mass carried by the outermost radial
// nodes; a grid too small for the requested accuracy shows up there.
struct CouplingResult {
    std::complex<double> value;
    double tail_estimate;
};

CouplingResult coupling_element_quadrature(const TrapWavefunction& bra,
                                           const TrapWavefunction& ket, const LGModeSpec& spec,
                                           const QuadratureGrid& grid, bool truncated);

}  // namespace lgtrap
