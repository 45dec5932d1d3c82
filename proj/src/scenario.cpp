#include "lgtrap/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>

#include "lgtrap/errors.hpp"
#include "lgtrap/numeric.hpp"

namespace lgtrap {

namespace {

using nlohmann::json;

constexpr const char* kUnitsLine =
    "units: frequencies in trap units (nu = 1), times in 1/nu, angular momenta in hbar, "
    "lengths in the trap scale r0";

std::string state_name(const CompositeBasis& basis, std::size_t composite_index) {
    const int level = basis.level_of(composite_index);
    const FockLabel lab = basis.trap().label(basis.trap_index_of(composite_index));
    return "m" + std::to_string(basis.internal().m_base() + level) + ";" +
           std::to_string(lab.n_plus) + "," + std::to_string(lab.n_minus);
}

// States a schedule can populate: breadth-first closure of the initial
// support under the nonzero structure of every step's coupling terms.
std::vector<std::size_t> reachable_support(const CompositeBasis& basis, const StateVector& initial,
                                           std::span<const PulseStep> steps) {
    const auto dim = basis.dimension();
    std::vector<bool> seen(dim, false);
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < dim; ++i)
        if (std::norm(initial.amplitudes(static_cast<Eigen::Index>(i))) > 0.0) {
            seen[i] = true;
            frontier.push_back(i);
        }

    // at t = 0 every monomial contributes with a nonzero coefficient and the
    // monomials occupy disjoint entries, so one snapshot carries the sparsity
    std::vector<Eigen::MatrixXcd> structures;
    for (const auto& step : steps) {
        if (step.model == EvolutionModel::RWA)
            structures.push_back(
                build_rwa_hamiltonian(basis, step.drive, step.drive.transition).mat);
        else
            structures.push_back(build_full_hamiltonian(basis, step.drive, 0.0).mat);
    }

    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t j : frontier)
            for (const auto& h : structures)
                for (std::size_t i = 0; i < dim; ++i)
                    if (!seen[i] && std::abs(h(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j))) > 1e-14) {
                        seen[i] = true;
                        next.push_back(i);
                    }
        frontier = std::move(next);
    }

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim; ++i)
        if (seen[i]) out.push_back(i);
    return out;
}

void write_trajectory_csv(const std::filesystem::path& file, const CompositeBasis& basis,
                          const ScheduleResult& result, const std::vector<std::size_t>& tracked) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());

    const ObservableSet obs(basis);
    out << "# " << kUnitsLine << "\n";
    out << "# tracked amplitudes: closure of the initial support under the schedule couplings\n";
    out << "t";
    for (std::size_t i : tracked)
        out << ",re(" << state_name(basis, i) << "),im(" << state_name(basis, i) << ")";
    for (int lev = 0; lev < basis.internal().level_count(); ++lev)
        out << ",pop_m" << basis.internal().m_base() + lev;
    out << ",exp_LZ,exp_lz,exp_N,norm\n";

    for (const auto& point : result.trajectory) {
        out << num::format_double(point.t);
        for (std::size_t i : tracked) {
            const auto a = point.amplitudes(static_cast<Eigen::Index>(i));
            out << ',' << num::format_double(a.real()) << ',' << num::format_double(a.imag());
        }
        StateVector s{basis.tag(), point.amplitudes};
        for (int lev = 0; lev < basis.internal().level_count(); ++lev) {
            double pop = 0.0;
            for (std::size_t t = 0; t < basis.trap().size(); ++t)
                pop += std::norm(point.amplitudes(
                    static_cast<Eigen::Index>(basis.index(lev, t))));
            out << ',' << num::format_double(pop);
        }
        out << ',' << num::format_double(expectation(obs.trap_lz, s).real());
        out << ',' << num::format_double(expectation(obs.internal_lz, s).real());
        out << ',' << num::format_double(expectation(obs.total_quanta, s).real());
        out << ',' << num::format_double(point.amplitudes.norm());
        out << '\n';
    }
}

json records_to_json(const CompositeBasis& basis, const ScheduleResult& result) {
    json arr = json::array();
    for (const auto& rec : result.records) {
        json r;
        r["index"] = rec.index;
        r["model"] = rec.model == EvolutionModel::RWA ? "RWA" : "FULL";
        r["duration"] = rec.duration;
        r["area"] = rec.area;
        r["exp_LZ"] = rec.exp_trap_lz;
        r["exp_lz"] = rec.exp_internal_lz;
        r["exp_N"] = rec.exp_total_quanta;
        json pops = json::object();
        for (std::size_t k = 0; k < rec.level_populations.size(); ++k)
            pops["m" + std::to_string(basis.internal().m_base() + static_cast<int>(k))] =
                rec.level_populations[k];
        r["level_populations"] = pops;
        r["norm"] = rec.norm;
        if (rec.rwa_infidelity) r["rwa_infidelity"] = *rec.rwa_infidelity;
        arr.push_back(std::move(r));
    }
    return arr;
}

json analysis_to_json(const CompositeBasis& basis, const StateVector& state) {
    const auto rho_int = partial_trace(state, basis, Subsystem::Internal);
    const auto rho_trap = partial_trace(state, basis, Subsystem::Trap);
    const auto sd = schmidt(state, basis);

    json a;
    a["entropy_bits"] = entanglement_entropy(rho_int, EntropyBase::Bits);
    a["entropy_nats"] = entanglement_entropy(rho_int, EntropyBase::Nats);
    a["purity_internal"] = purity(rho_int);
    a["purity_trap"] = purity(rho_trap);
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i)
        coeffs.push_back(sd.coefficients(i));
    a["schmidt_coefficients"] = coeffs;

    json levels = json::object();
    for (int lev = 0; lev < basis.internal().level_count(); ++lev) {
        double pop = 0.0;
        for (std::size_t t = 0; t < basis.trap().size(); ++t)
            pop += std::norm(state.amplitudes(static_cast<Eigen::Index>(basis.index(lev, t))));
        levels["m" + std::to_string(basis.internal().m_base() + lev)] = pop;
    }
    a["level_populations"] = levels;

    json branches = json::object();
    for (std::size_t t = 0; t < basis.trap().size(); ++t) {
        double pop = 0.0;
        for (int lev = 0; lev < basis.internal().level_count(); ++lev)
            pop += std::norm(state.amplitudes(static_cast<Eigen::Index>(basis.index(lev, t))));
        if (pop > 1e-12) {
            const FockLabel lab = basis.trap().label(t);
            branches[std::to_string(lab.n_plus) + "," + std::to_string(lab.n_minus)] = pop;
        }
    }
    a["trap_branch_populations"] = branches;
    a["norm"] = state.norm();
    return a;
}

void write_json_file(const std::filesystem::path& file, const json& j, const char* units) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    json wrapped;
    wrapped["units"] = units;
    wrapped["data"] = j;
    out << wrapped.dump(2) << '\n';
}

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    const CompositeBasis basis = cfg.make_basis();
    const StateVector initial = cfg.make_initial_state(basis);

    ScheduleOptions opts;
    opts.integrator = cfg.integrator;
    opts.samples_per_step = cfg.outputs.samples_per_step;
    opts.sample_times = cfg.outputs.sample_times;
    const ScheduleResult result = run_schedule(basis, initial, cfg.schedule, opts);

    std::filesystem::create_directories(out_dir);
    ScenarioReport report;

    const auto tracked = reachable_support(basis, initial, cfg.schedule);
    const auto traj_path = out_dir / cfg.outputs.trajectory_csv;
    write_trajectory_csv(traj_path, basis, result, tracked);
    report.files_written.push_back(traj_path);

    report.records = records_to_json(basis, result);
    const auto rec_path = out_dir / cfg.outputs.records_json;
    write_json_file(rec_path, report.records, kUnitsLine);
    report.files_written.push_back(rec_path);

    report.analysis = analysis_to_json(basis, result.final_state);
    const auto ana_path = out_dir / cfg.outputs.analysis_json;
    write_json_file(ana_path, report.analysis, kUnitsLine);
    report.files_written.push_back(ana_path);
    return report;
}

OracleReport run_oracle_suite(const ScenarioConfig& cfg) {
    OracleReport report;
    report.eta = cfg.drive.eta;

    // The quadrature compares against the untruncated algebra, so give the
    // matrix route enough headroom above the checked block.
    const int check_n = 3;
    const int max_l = 2;
    const FockBasis basis = FockBasis::build(std::max(cfg.n_max, check_n + max_l));
    const auto ap = annihilate_plus(basis);
    const auto am = annihilate_minus(basis);

    const double waist = cfg.waist();
    const auto grid = QuadratureGrid::build(QuadratureGrid::default_r_max(cfg.r0, waist));

    std::vector<FockLabel> block;
    for (const auto& lab : basis.labels())
        if (lab.total() <= check_n) block.push_back(lab);

    for (int l = 1; l <= max_l; ++l) {
        const auto coupling = matrix_power(ap.dagger() + am, l);  // beam-phase raising, l > 0
        const double eta_pow = std::pow(cfg.drive.eta, l);
        for (const auto& bra : block) {
            for (const auto& ket : block) {
                OracleRow row;
                row.bra_N = bra.total();
                row.bra_M = bra.angular();
                row.ket_N = ket.total();
                row.ket_M = ket.angular();
                row.l = l;
                row.algebraic =
                    eta_pow * coupling.mat(static_cast<Eigen::Index>(basis.index_of(bra)),
                                           static_cast<Eigen::Index>(basis.index_of(ket)));
                const TrapWavefunction bw(bra.total(), bra.angular(), cfg.r0);
                const TrapWavefunction kw(ket.total(), ket.angular(), cfg.r0);
                const auto quad = coupling_element_quadrature(bw, kw, {l, waist, 1.0}, grid, true);
                if (quad.tail_estimate > 1e-10)
                    throw NumericalError("oracle: quadrature tail estimate " +
                                         std::to_string(quad.tail_estimate) +
                                         " signals a too-small grid");
                row.quadrature = quad.value;
                row.abs_diff = std::abs(row.quadrature - row.algebraic);
                report.max_abs_diff = std::max(report.max_abs_diff, row.abs_diff);
                report.rows.push_back(row);
            }
        }
    }
    report.passed = report.max_abs_diff <= report.tolerance;
    return report;
}

json OracleReport::to_json() const {
    json j;
    j["eta"] = eta;
    j["tolerance"] = tolerance;
    j["max_abs_diff"] = max_abs_diff;
    j["passed"] = passed;
    json rows_json = json::array();
    for (const auto& row : rows) {
        json r;
        r["bra"] = {row.bra_N, row.bra_M};
        r["ket"] = {row.ket_N, row.ket_M};
        r["l"] = row.l;
        r["algebraic"] = {row.algebraic.real(), row.algebraic.imag()};
        r["quadrature"] = {row.quadrature.real(), row.quadrature.imag()};
        r["abs_diff"] = row.abs_diff;
        rows_json.push_back(std::move(r));
    }
    j["rows"] = rows_json;
    return j;
}

SweepReport run_sweep(const SweepConfig& sweep, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    SweepReport report;
    json manifest;
    manifest["parameter"] = sweep.parameter;
    json entries = json::array();

    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        const double value = sweep.values[i];
        const ScenarioConfig cfg = sweep.scenario_for(value);
        const auto sub = out_dir / ("scenario_" + std::to_string(i));
        const ScenarioReport scenario = run_scenario(cfg, sub);

        json entry;
        entry["index"] = static_cast<int>(i);
        entry["value"] = value;
        entry["directory"] = sub.filename().string();
        entry["analysis"] = scenario.analysis;
        entry["records"] = scenario.records;
        entries.push_back(std::move(entry));
        for (const auto& f : scenario.files_written) report.files_written.push_back(f);
    }
    manifest["scenarios"] = entries;

    const auto manifest_path = out_dir / "sweep_manifest.json";
    write_json_file(manifest_path, manifest, kUnitsLine);
    report.files_written.push_back(manifest_path);
    report.manifest = manifest;
    return report;
}

namespace {

void write_grid_csv(const std::filesystem::path& file, double extent, int points,
                    const std::function<std::complex<double>(double, double)>& f) {
    if (points < 2) throw std::invalid_argument("grid dump: need at least 2 points per axis");
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "# " << kUnitsLine << "\n";
    out << "x,y,re,im,abs2\n";
    for (int i = 0; i < points; ++i) {
        const double x = -extent + 2.0 * extent * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            const double y = -extent + 2.0 * extent * j / (points - 1);
            const double R = std::hypot(x, y);
            const double Phi = std::atan2(y, x);
            const auto v = f(R, Phi);
            out << num::format_double(x) << ',' << num::format_double(y) << ','
                << num::format_double(v.real()) << ',' << num::format_double(v.imag()) << ','
                << num::format_double(std::norm(v)) << '\n';
        }
    }
}

}  // namespace

void write_mode_grid_csv(const std::filesystem::path& file, const LGModeSpec& spec, double extent,
                         int points) {
    write_grid_csv(file, extent, points,
                   [&](double R, double Phi) { return eval_lg_mode(spec, R, Phi); });
}

void write_trap_grid_csv(const std::filesystem::path& file, const TrapWavefunction& wf,
                         double extent, int points) {
    write_grid_csv(file, extent, points,
                   [&](double R, double Phi) { return eval_trap_wavefunction(wf, R, Phi); });
}

void write_momentum_csv(const std::filesystem::path& file, const TrapWavefunction& wf,
                        const QuadratureGrid& grid, const MomentumOptions& options) {
    const auto dist = momentum_distribution(wf, grid, options);
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "# " << kUnitsLine << "\n";
    out << "# momenta in hbar/r0; density normalized to unit integral (raw integral "
        << num::format_double(dist.raw_integral) << ")\n";
    out << "px,py,prob\n";
    for (Eigen::Index i = 0; i < dist.axis.size(); ++i)
        for (Eigen::Index j = 0; j < dist.axis.size(); ++j)
            out << num::format_double(dist.axis(i)) << ',' << num::format_double(dist.axis(j))
                << ',' << num::format_double(dist.values(i, j)) << '\n';
}

}  // namespace lgtrap
