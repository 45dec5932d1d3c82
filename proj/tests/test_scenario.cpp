#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "lgtrap/scenario.hpp"

using namespace lgtrap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json entangling_scenario() {
    // upper level, trap ground; a half-transfer pulse entangles the factors
    return json::parse(R"({
        "trap": {"n_max": 4},
        "drive": {"l": -1, "rabi": 1.0, "eta": 0.1, "phase": -1.5707963267948966},
        "initial_state": "upper",
        "schedule": [{"area": 0.7853981633974483, "model": "RWA"}],
        "outputs": {"samples_per_step": 8}
    })");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("the entangling preset lands on one full bit") {
    TempDir dir("lgtrap_test_entangle");
    const auto cfg = parse_config(entangling_scenario());
    const auto report = run_scenario(cfg, dir.path);

    CHECK(std::abs(report.analysis.at("entropy_bits").get<double>() - 1.0) < 1e-9);
    const auto coeffs = report.analysis.at("schmidt_coefficients");
    REQUIRE(coeffs.size() >= 2);
    CHECK(std::abs(coeffs[0].get<double>() - 1.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(coeffs[1].get<double>() - 1.0 / std::sqrt(2.0)) < 1e-9);

    for (const auto& f : report.files_written) CHECK(fs::exists(f));
}

TEST_CASE("a zero-length schedule reports the initial state") {
    TempDir dir("lgtrap_test_idle");
    auto j = entangling_scenario();
    j["schedule"] = json::array();
    const auto report = run_scenario(parse_config(j), dir.path);
    CHECK(report.records.empty());
    CHECK(report.analysis.at("entropy_bits").get<double>() < 1e-12);
    CHECK(report.analysis.at("level_populations").at("m1").get<double>() == 1.0);

    // trajectory still carries the t = 0 snapshot
    const auto csv = slurp(dir.path / "trajectory.csv");
    CHECK(csv.find("\n0,") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical outputs") {
    TempDir a("lgtrap_test_det_a"), b("lgtrap_test_det_b");
    const auto cfg = parse_config(entangling_scenario());
    run_scenario(cfg, a.path);
    run_scenario(cfg, b.path);
    for (const auto* name : {"trajectory.csv", "records.json", "analysis.json"})
        CHECK(slurp(a.path / name) == slurp(b.path / name));
}

TEST_CASE("trajectory CSV self-describes units and tracks the resonant pair") {
    TempDir dir("lgtrap_test_csv");
    run_scenario(parse_config(entangling_scenario()), dir.path);
    const auto csv = slurp(dir.path / "trajectory.csv");
    CHECK(csv.find("# units:") != std::string::npos);
    CHECK(csv.find("re(m1;0,0)") != std::string::npos);  // initial support
    CHECK(csv.find("re(m0;1,0)") != std::string::npos);  // reachable partner
    CHECK(csv.find("exp_LZ") != std::string::npos);
}

TEST_CASE("oracle suite agrees across all checked pairs") {
    auto j = entangling_scenario();
    j["drive"]["eta"] = 0.15;
    const auto report = run_oracle_suite(parse_config(j));
    CHECK(report.passed);
    CHECK(report.max_abs_diff <= 1e-8);
    // 10 states with N <= 3, both beam orders
    CHECK(report.rows.size() == 200);

    auto find_row = [&](int bn, int bm, int kn, int km, int l) -> const OracleRow& {
        for (const auto& row : report.rows)
            if (row.bra_N == bn && row.bra_M == bm && row.ket_N == kn && row.ket_M == km &&
                row.l == l)
                return row;
        throw std::logic_error("row not found");
    };

    // single-quantum element equals eta on both routes
    const auto& r1 = find_row(1, 1, 0, 0, 1);
    CHECK(std::abs(r1.algebraic - 0.15) < 1e-12);
    CHECK(std::abs(r1.quadrature - 0.15) < 1e-9);

    // counter-rotating partner vanishes on both routes
    const auto& r0 = find_row(1, -1, 0, 0, 1);
    CHECK(std::abs(r0.algebraic) == 0.0);
    CHECK(std::abs(r0.quadrature) < 1e-10);

    // two-quantum element carries the sqrt(2) ladder factor
    const auto& r2 = find_row(2, 2, 0, 0, 2);
    CHECK(std::abs(r2.algebraic - std::sqrt(2.0) * 0.15 * 0.15) < 1e-12);
    CHECK(std::abs(r2.quadrature - r2.algebraic) < 1e-8);

    CHECK_FALSE(report.to_json().at("rows").empty());
}

TEST_CASE("sweeping the drive maps out the sideband-error trend") {
    TempDir dir("lgtrap_test_sweep");
    json j;
    j["base"] = json::parse(R"({
        "trap": {"n_max": 4},
        "drive": {"l": -1, "rabi": 0.2, "eta": 0.1, "phase": -1.5707963267948966},
        "initial_state": "upper",
        "schedule": [{"area": 1.5707963267948966, "model": "FULL"}],
        "outputs": {"samples_per_step": 0}
    })");
    j["parameter"] = "drive.rabi";
    j["values"] = json::array({0.2, 0.1, 0.05});

    const auto report = run_sweep(parse_sweep_config(j), dir.path);

    const auto& scenarios = report.manifest.at("scenarios");
    REQUIRE(scenarios.size() == 3);
    std::vector<double> eps;
    for (const auto& s : scenarios)
        eps.push_back(s.at("records")[0].at("rwa_infidelity").get<double>());
    CHECK(eps[0] > eps[1]);
    CHECK(eps[1] > eps[2]);
    CHECK(fs::exists(dir.path / "sweep_manifest.json"));
    CHECK(fs::exists(dir.path / "scenario_0" / "analysis.json"));
}

TEST_CASE("grid dumps carry the documented columns") {
    TempDir dir("lgtrap_test_grids");
    const LGModeSpec spec{1, 5.0, 1.0};
    write_mode_grid_csv(dir.path / "mode.csv", spec, 10.0, 21);
    const auto mode_csv = slurp(dir.path / "mode.csv");
    CHECK(mode_csv.find("x,y,re,im,abs2") != std::string::npos);

    const TrapWavefunction wf(1, 1, 1.0);
    write_trap_grid_csv(dir.path / "trap.csv", wf, 4.0, 21);
    CHECK(slurp(dir.path / "trap.csv").find("# units:") != std::string::npos);

    const auto grid = QuadratureGrid::build(8.0);
    write_momentum_csv(dir.path / "mom.csv", wf, grid, {64, 0.0});
    CHECK(slurp(dir.path / "mom.csv").find("px,py,prob") != std::string::npos);
}
