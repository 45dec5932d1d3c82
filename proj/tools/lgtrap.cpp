#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "lgtrap/errors.hpp"
#include "lgtrap/numeric.hpp"
#include "lgtrap/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOracle = 4;

void print_error_json(int code, const std::string& kind, const std::string& message,
                      const std::vector<std::string>& violations = {}) {
    json err;
    err["error"]["code"] = code;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    if (!violations.empty()) err["error"]["violations"] = violations;
    std::cout << err.dump(2) << std::endl;
}

void print_warnings(const lgtrap::ScenarioConfig& cfg) {
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_validate(const fs::path& config_path) {
    const auto cfg = lgtrap::load_config(config_path);
    print_warnings(cfg);
    json ok;
    ok["valid"] = true;
    ok["warnings"] = cfg.warnings;
    std::cout << ok.dump(2) << std::endl;
    return 0;
}

int cmd_simulate(const fs::path& config_path, const fs::path& out_dir) {
    const auto cfg = lgtrap::load_config(config_path);
    print_warnings(cfg);
    const auto report = lgtrap::run_scenario(cfg, out_dir);
    for (const auto& f : report.files_written) std::cerr << "wrote " << f.string() << '\n';
    std::cout << report.analysis.dump(2) << std::endl;
    return 0;
}

int cmd_sweep(const fs::path& config_path, const fs::path& out_dir) {
    const auto sweep = lgtrap::load_sweep_config(config_path);
    print_warnings(sweep.base);
    const auto report = lgtrap::run_sweep(sweep, out_dir);
    for (const auto& f : report.files_written) std::cerr << "wrote " << f.string() << '\n';
    std::cout << report.manifest.dump(2) << std::endl;
    return 0;
}

int cmd_oracle(const fs::path& config_path, const fs::path& out_dir, bool have_out) {
    const auto cfg = lgtrap::load_config(config_path);
    const auto report = lgtrap::run_oracle_suite(cfg);

    std::cout << "# (bra N,M | ket N,M | l): algebraic, quadrature, |diff|   [eta = "
              << lgtrap::num::format_double(report.eta) << "]\n";
    for (const auto& row : report.rows) {
        if (std::abs(row.algebraic) < 1e-14 && std::abs(row.quadrature) < 1e-14 &&
            row.abs_diff < 1e-14)
            continue;  // keep the table readable; zeros are still in the JSON
        std::cout << '(' << row.bra_N << ',' << row.bra_M << " | " << row.ket_N << ','
                  << row.ket_M << " | " << row.l << "): "
                  << lgtrap::num::format_double(row.algebraic.real()) << ", "
                  << lgtrap::num::format_double(row.quadrature.real()) << ", "
                  << lgtrap::num::format_double(row.abs_diff) << '\n';
    }
    std::cout << (report.passed ? "ORACLE PASS" : "ORACLE FAIL") << " (max |diff| = "
              << lgtrap::num::format_double(report.max_abs_diff) << ", tolerance "
              << lgtrap::num::format_double(report.tolerance) << ")" << std::endl;

    if (have_out) {
        fs::create_directories(out_dir);
        std::ofstream f(out_dir / "oracle_report.json");
        f << report.to_json().dump(2) << '\n';
        std::cerr << "wrote " << (out_dir / "oracle_report.json").string() << '\n';
    }
    return report.passed ? 0 : kExitOracle;
}

struct GridChoice {
    std::vector<std::string> trap_states;
    std::vector<std::string> momentum_states;
    bool lg_mode = false;
    int points = 201;
    double extent = 0.0;  // 0: derived from r0/waist
};

std::pair<int, int> parse_nm(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw lgtrap::ConfigError({"state '" + s + "': expected the form N,M"});
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw lgtrap::ConfigError({"state '" + s + "': expected integers N,M"});
    }
}

int cmd_modes(const fs::path& config_path, const fs::path& out_dir, const GridChoice& choice) {
    const auto cfg = lgtrap::load_config(config_path);
    print_warnings(cfg);
    fs::create_directories(out_dir);

    const double waist = cfg.waist();
    const double extent =
        choice.extent > 0.0 ? choice.extent : 6.0 * std::max(cfg.r0, choice.lg_mode ? waist : cfg.r0);

    if (choice.lg_mode) {
        const lgtrap::LGModeSpec spec{cfg.drive.l, waist, 1.0};
        const auto file = out_dir / "lg_mode.csv";
        lgtrap::write_mode_grid_csv(file, spec, extent, choice.points);
        std::cerr << "wrote " << file.string() << '\n';
    }
    for (const auto& s : choice.trap_states) {
        const auto [N, M] = parse_nm(s);
        const lgtrap::TrapWavefunction wf(N, M, cfg.r0);
        const auto file = out_dir / ("trap_" + std::to_string(N) + "_" + std::to_string(M) + ".csv");
        lgtrap::write_trap_grid_csv(file, wf, extent, choice.points);
        std::cerr << "wrote " << file.string() << '\n';
    }
    for (const auto& s : choice.momentum_states) {
        const auto [N, M] = parse_nm(s);
        const lgtrap::TrapWavefunction wf(N, M, cfg.r0);
        const auto grid =
            lgtrap::QuadratureGrid::build(lgtrap::QuadratureGrid::default_r_max(cfg.r0, waist));
        const auto file =
            out_dir / ("momentum_" + std::to_string(N) + "_" + std::to_string(M) + ".csv");
        lgtrap::write_momentum_csv(file, wf, grid);
        std::cerr << "wrote " << file.string() << '\n';
    }
    if (!choice.lg_mode && choice.trap_states.empty() && choice.momentum_states.empty())
        throw lgtrap::ConfigError(
            {"modes: nothing to dump, pass --lg-mode, --trap-state N,M or --momentum N,M"});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulator of a single trapped atom exchanging spin and orbital angular momentum with a "
        "doughnut beam. Deterministic by construction: no RNG anywhere in the core."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    bool seedless = true;

    auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--config", config_path, "scenario JSON file")->required();
        if (with_out) sub->add_option("--out", out_dir, "output directory (default ./out)");
        sub->add_flag("--seedless", seedless,
                      "deterministic mode (always on; the core contains no RNG)");
    };

    auto* simulate = app.add_subcommand("simulate", "run one scenario, write CSV + JSON outputs");
    add_common(simulate, true);
    auto* sweep = app.add_subcommand("sweep", "run a scenario per swept value, write a manifest");
    add_common(sweep, true);
    auto* oracle =
        app.add_subcommand("oracle", "cross-check quadrature couplings against the operator algebra");
    add_common(oracle, true);
    auto* modes = app.add_subcommand("modes", "dump beam/trap/momentum grids as CSV");
    add_common(modes, true);
    GridChoice choice;
    modes->add_flag("--lg-mode", choice.lg_mode, "dump the configured beam profile");
    modes->add_option("--trap-state", choice.trap_states, "trap eigenstate N,M (repeatable)");
    modes->add_option("--momentum", choice.momentum_states,
                      "momentum distribution of trap state N,M (repeatable)");
    modes->add_option("--points", choice.points, "grid points per axis (default 201)");
    modes->add_option("--extent", choice.extent, "half-width of the square grid");
    auto* validate = app.add_subcommand("validate", "check a scenario file, report every violation");
    add_common(validate, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
        if (oracle->parsed()) return cmd_oracle(config_path, out_dir, !out_dir.empty());
        if (modes->parsed()) return cmd_modes(config_path, out_dir, choice);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const lgtrap::ConfigError& e) {
        print_error_json(kExitConfig, "config", "configuration invalid", e.violations());
        return kExitConfig;
    } catch (const lgtrap::NumericalError& e) {
        print_error_json(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        print_error_json(1, "internal", e.what());
        return 1;
    }
    return 0;
}
