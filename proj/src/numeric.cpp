#include "lgtrap/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lgtrap::num {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th root (counted from +1 downwards).
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) {
                // one clean-up step after convergence
                p0 = 1.0;
                p1 = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                z -= p0 / pp;
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    return {x, w};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
    auto [x, w] = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        x[i] = mid + hw * x[i];
        w[i] *= hw;
    }
    return {x, w};
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

}  // namespace lgtrap::num
