#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgtrap/operator_matrix.hpp"

namespace lgtrap {

// Finite ladder of circular atomic states. Level k stands for the circular
// state with magnetic quantum number m_base + k, so its internal angular
// momentum is (m_base + k) in units of hbar. transition_frequencies[k] is
// the gap between levels k and k+1 in units of the trap frequency.
class InternalLadder {
public:
    // freqs empty -> every gap defaults to 100 trap units, comfortably in the
    // resolved-sideband regime while keeping full-model integration cheap.
    static InternalLadder make(int m_base, int level_count, std::vector<double> freqs = {},
                               std::optional<std::vector<double>> dipole_scales = std::nullopt);

    int m_base() const { return m_m_base; }
    int level_count() const { return m_level_count; }
    const std::vector<double>& transition_frequencies() const { return m_freqs; }
    double gap(int transition) const;
    const std::optional<std::vector<double>>& dipole_scales() const { return m_dipoles; }

    const std::string& tag() const { return m_tag; }

private:
    int m_m_base = 0;
    int m_level_count = 2;
    std::vector<double> m_freqs;
    std::optional<std::vector<double>> m_dipoles;
    std::string m_tag;
};

// |k><k+1| for transition k; annihilates the bottom level.
OperatorMatrix lowering_operator(const InternalLadder& ladder, int k);

// l_z, diagonal with entries m_base + k (units of hbar).
OperatorMatrix angular_momentum_internal(const InternalLadder& ladder);

// Metadata sanity check: does the stated Rabi frequency equal
// 2 * d * field_amplitude (hbar = 1) for the given transition's dipole scale?
// Relative tolerance 1e-12; throws if no dipole metadata is present.
bool dipole_consistency(const InternalLadder& ladder, double field_amplitude, double rabi,
                        int transition = 0);

}  // namespace lgtrap
