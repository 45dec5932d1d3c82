#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lgtrap::num {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence. Nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

// Same rule mapped onto [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);

// Shortest decimal representation that round-trips the exact binary value.
// Used for every float written to CSV/JSON so identical runs produce
// byte-identical files.
std::string format_double(double value);

}  // namespace lgtrap::num
