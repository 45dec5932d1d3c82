#pragma once

#include <complex>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lgtrap/analysis.hpp"
#include "lgtrap/config.hpp"

namespace lgtrap {

struct ScenarioReport {
    nlohmann::json records;   // per-step schedule records
    nlohmann::json analysis;  // final-state entanglement report
    std::vector<std::filesystem::path> files_written;
};

// Executes the schedule, writes trajectory CSV plus records/analysis JSON
// into out_dir. Deterministic: identical config gives byte-identical files.
ScenarioReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct OracleRow {
    int bra_N, bra_M, ket_N, ket_M, l;
    std::complex<double> algebraic;
    std::complex<double> quadrature;
    double abs_diff;
};

struct OracleReport {
    double eta = 0.0;
    std::vector<OracleRow> rows;
    double max_abs_diff = 0.0;
    double tolerance = 1e-8;
    bool passed = false;

    nlohmann::json to_json() const;
};

// Cross-checks truncated-mode quadrature elements against the operator
// algebra for every trap pair with N <= 3 and l in {1, 2}.
OracleReport run_oracle_suite(const ScenarioConfig& cfg);

struct SweepReport {
    nlohmann::json manifest;
    std::vector<std::filesystem::path> files_written;
};

// Runs one scenario per sweep value (in input order), each into its own
// subdirectory, and assembles an index manifest.
SweepReport run_sweep(const SweepConfig& sweep, const std::filesystem::path& out_dir);

// Square-grid CSV dumps (columns x, y, re, im, abs2, row-major over the grid).
void write_mode_grid_csv(const std::filesystem::path& file, const LGModeSpec& spec, double extent,
                         int points);
void write_trap_grid_csv(const std::filesystem::path& file, const TrapWavefunction& wf,
                         double extent, int points);
void write_momentum_csv(const std::filesystem::path& file, const TrapWavefunction& wf,
                        const QuadratureGrid& grid, const MomentumOptions& options = {});

}  // namespace lgtrap
