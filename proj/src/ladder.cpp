#include "lgtrap/ladder.hpp"

#include <cmath>
#include <stdexcept>

namespace lgtrap {

InternalLadder InternalLadder::make(int m_base, int level_count, std::vector<double> freqs,
                                    std::optional<std::vector<double>> dipole_scales) {
    if (m_base < 0) throw std::invalid_argument("InternalLadder: m_base must be nonnegative");
    if (level_count < 2) throw std::invalid_argument("InternalLadder: need at least two levels");
    if (freqs.empty()) freqs.assign(static_cast<std::size_t>(level_count - 1), 100.0);
    if (freqs.size() != static_cast<std::size_t>(level_count - 1))
        throw std::invalid_argument("InternalLadder: need level_count-1 transition frequencies");
    for (double f : freqs)
        if (!(f > 0.0))
            throw std::invalid_argument("InternalLadder: transition frequencies must be positive");
    if (dipole_scales) {
        if (dipole_scales->size() != static_cast<std::size_t>(level_count - 1))
            throw std::invalid_argument("InternalLadder: need level_count-1 dipole scales");
        for (double d : *dipole_scales)
            if (!(d > 0.0))
                throw std::invalid_argument("InternalLadder: dipole scales must be positive");
    }

    InternalLadder l;
    l.m_m_base = m_base;
    l.m_level_count = level_count;
    l.m_freqs = std::move(freqs);
    l.m_dipoles = std::move(dipole_scales);
    l.m_tag = "internal(m=" + std::to_string(m_base) + ",levels=" + std::to_string(level_count) + ")";
    return l;
}

double InternalLadder::gap(int transition) const {
    if (transition < 0 || transition >= m_level_count - 1)
        throw std::out_of_range("InternalLadder::gap: transition index out of range");
    return m_freqs[static_cast<std::size_t>(transition)];
}

OperatorMatrix lowering_operator(const InternalLadder& ladder, int k) {
    if (k < 0 || k >= ladder.level_count() - 1)
        throw std::out_of_range("lowering_operator: transition index out of range");
    auto op = OperatorMatrix::zero(ladder.tag(), ladder.level_count());
    op.mat(k, k + 1) = 1.0;
    return op;
}

OperatorMatrix angular_momentum_internal(const InternalLadder& ladder) {
    auto op = OperatorMatrix::zero(ladder.tag(), ladder.level_count());
    for (int k = 0; k < ladder.level_count(); ++k) op.mat(k, k) = ladder.m_base() + k;
    return op;
}

bool dipole_consistency(const InternalLadder& ladder, double field_amplitude, double rabi,
                        int transition) {
    if (!ladder.dipole_scales())
        throw std::invalid_argument("dipole_consistency: ladder carries no dipole metadata");
    if (transition < 0 || transition >= ladder.level_count() - 1)
        throw std::out_of_range("dipole_consistency: transition index out of range");
    const double d = (*ladder.dipole_scales())[static_cast<std::size_t>(transition)];
    const double expected = 2.0 * d * field_amplitude;
    return std::abs(rabi - expected) <= 1e-12 * std::abs(expected);
}

}  // namespace lgtrap
