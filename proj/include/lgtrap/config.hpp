#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lgtrap/composite.hpp"
#include "lgtrap/dynamics.hpp"

namespace lgtrap {

struct OutputSpec {
    std::string trajectory_csv = "trajectory.csv";
    std::string records_json = "records.json";
    std::string analysis_json = "analysis.json";
    int samples_per_step = 50;
    std::vector<double> sample_times;  // absolute; overrides samples_per_step
};

struct InitialStateSpec {
    enum class Kind { Ground, Upper, Superposition, Amplitudes };
    Kind kind = Kind::Ground;
    // Superposition: two internal coefficients on the lowest two levels,
    // trap in its ground state. Amplitudes: the full composite vector.
    std::vector<std::complex<double>> amplitudes;
};

// Full experiment description. Parsed fail-closed from JSON: unknown keys are
// rejected and every violation is reported, not just the first.
struct ScenarioConfig {
    int n_max = 6;
    double r0 = 1.0;

    int m_base = 0;
    int level_count = 2;
    std::vector<double> transition_frequencies;  // defaults applied by InternalLadder
    std::optional<std::vector<double>> dipole_scales;

    DriveSpec drive;
    std::vector<PulseStep> schedule;
    InitialStateSpec initial_state;
    IntegratorOptions integrator;
    OutputSpec outputs;

    std::vector<std::string> warnings;  // accepted-but-suspicious settings

    InternalLadder make_ladder() const;
    CompositeBasis make_basis() const;
    StateVector make_initial_state(const CompositeBasis& basis) const;
    double waist() const { return r0 / drive.eta; }
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

struct SweepConfig {
    ScenarioConfig base;
    std::string parameter;  // drive.rabi | drive.eta | drive.detuning | drive.phase |
                            // integrator.tolerance
    std::vector<double> values;

    ScenarioConfig scenario_for(double value) const;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

}  // namespace lgtrap
