#include "lgtrap/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace lgtrap {

FockBasis FockBasis::build(int n_max) {
    if (n_max < 0) throw std::invalid_argument("FockBasis: n_max must be nonnegative");
    FockBasis b;
    b.m_n_max = n_max;
    b.m_labels.reserve(static_cast<std::size_t>(n_max + 1) * (n_max + 2) / 2);
    for (int N = 0; N <= n_max; ++N)
        for (int np = 0; np <= N; ++np) b.m_labels.push_back({np, N - np});
    b.m_tag = "trap(nmax=" + std::to_string(n_max) + ")";
    return b;
}

bool FockBasis::contains(const FockLabel& l) const {
    return l.n_plus >= 0 && l.n_minus >= 0 && l.total() <= m_n_max;
}

std::size_t FockBasis::index_of(const FockLabel& l) const {
    if (!contains(l)) throw std::out_of_range("FockBasis::index_of: label outside truncation");
    const int N = l.total();
    // N*(N+1)/2 labels precede the N-quanta block; within it n_plus ascends.
    return static_cast<std::size_t>(N) * (N + 1) / 2 + static_cast<std::size_t>(l.n_plus);
}

OperatorMatrix annihilate_plus(const FockBasis& basis) {
    auto op = OperatorMatrix::zero(basis.tag(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const FockLabel& src = basis.label(j);
        if (src.n_plus == 0) continue;
        const FockLabel dst{src.n_plus - 1, src.n_minus};
        op.mat(static_cast<Eigen::Index>(basis.index_of(dst)), static_cast<Eigen::Index>(j)) =
            std::sqrt(static_cast<double>(src.n_plus));
    }
    return op;
}

OperatorMatrix annihilate_minus(const FockBasis& basis) {
    auto op = OperatorMatrix::zero(basis.tag(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const FockLabel& src = basis.label(j);
        if (src.n_minus == 0) continue;
        const FockLabel dst{src.n_plus, src.n_minus - 1};
        op.mat(static_cast<Eigen::Index>(basis.index_of(dst)), static_cast<Eigen::Index>(j)) =
            std::sqrt(static_cast<double>(src.n_minus));
    }
    return op;
}

OperatorMatrix cartesian_ladder(const FockBasis& basis, Axis axis) {
    const auto ap = annihilate_plus(basis);
    const auto am = annihilate_minus(basis);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (axis == Axis::X) return {basis.tag(), inv_sqrt2 * (ap.mat + am.mat)};
    return {basis.tag(), std::complex<double>(0, inv_sqrt2) * (ap.mat - am.mat)};
}

std::pair<OperatorMatrix, OperatorMatrix> number_operators(const FockBasis& basis) {
    auto np = OperatorMatrix::zero(basis.tag(), static_cast<Eigen::Index>(basis.size()));
    auto nm = np;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        np.mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = basis.label(j).n_plus;
        nm.mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = basis.label(j).n_minus;
    }
    return {np, nm};
}

OperatorMatrix angular_momentum_trap(const FockBasis& basis) {
    auto op = OperatorMatrix::zero(basis.tag(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        op.mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) =
            basis.label(j).angular();
    return op;
}

OperatorMatrix trap_hamiltonian(const FockBasis& basis) {
    auto op = OperatorMatrix::zero(basis.tag(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        op.mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) =
            basis.label(j).total() + 1.0;
    return op;
}

}  // namespace lgtrap
