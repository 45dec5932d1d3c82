#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lgtrap/operator_matrix.hpp"

namespace lgtrap {

// One number state of the planar oscillator in the circular basis:
// n_plus right-rotating quanta, n_minus left-rotating quanta.
// Total quanta N = n_plus + n_minus, angular momentum M = n_plus - n_minus
// (in units of hbar).
struct FockLabel {
    int n_plus = 0;
    int n_minus = 0;

    int total() const { return n_plus + n_minus; }
    int angular() const { return n_plus - n_minus; }

    friend bool operator==(const FockLabel&, const FockLabel&) = default;
};

// Truncated oscillator space: all labels with N <= n_max, enumerated in
// canonical order (ascending N, then ascending n_plus). index_of is the
// exact inverse of the enumeration.
class FockBasis {
public:
    static FockBasis build(int n_max);

    int n_max() const { return m_n_max; }
    std::size_t size() const { return m_labels.size(); }
    const std::vector<FockLabel>& labels() const { return m_labels; }
    const FockLabel& label(std::size_t i) const { return m_labels.at(i); }

    bool contains(const FockLabel& l) const;
    std::size_t index_of(const FockLabel& l) const;  // throws if outside the truncation

    const std::string& tag() const { return m_tag; }

private:
    int m_n_max = 0;
    std::vector<FockLabel> m_labels;
    std::string m_tag;
};

enum class Axis { X, Y };

// Matrix elements <n_plus-1, n_minus| a_+ |n_plus, n_minus> = sqrt(n_plus);
// transitions leaving the truncated space are zero.
OperatorMatrix annihilate_plus(const FockBasis& basis);
OperatorMatrix annihilate_minus(const FockBasis& basis);

// Cartesian ladder operators a_X = (a_+ + a_-)/sqrt2, a_Y = i(a_+ - a_-)/sqrt2.
OperatorMatrix cartesian_ladder(const FockBasis& basis, Axis axis);

// Diagonal occupation operators (n_plus, n_minus).
std::pair<OperatorMatrix, OperatorMatrix> number_operators(const FockBasis& basis);

// L_Z, diagonal with entries M (units of hbar).
OperatorMatrix angular_momentum_trap(const FockBasis& basis);

// Oscillator energy n_plus + n_minus + 1 (units of hbar*nu, zero point included).
OperatorMatrix trap_hamiltonian(const FockBasis& basis);

}  // namespace lgtrap
