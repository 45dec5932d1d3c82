#include "lgtrap/config.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "lgtrap/errors.hpp"

namespace lgtrap {

namespace {

using nlohmann::json;

class Validator {
public:
    std::vector<std::string> violations;

    void fail(const std::string& path, const std::string& msg) {
        violations.push_back(path + ": " + msg);
    }

    void reject_unknown_keys(const json& obj, const std::string& path,
                             const std::set<std::string>& allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
    }

    bool require_object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        fail(path, "must be an object");
        return false;
    }

    std::optional<double> get_number(const json& obj, const std::string& path,
                                     const std::string& key) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "must be a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<int> get_int(const json& obj, const std::string& path, const std::string& key) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(path + "." + key, "must be an integer");
            return std::nullopt;
        }
        return v.get<int>();
    }

    std::optional<std::vector<double>> get_number_list(const json& obj, const std::string& path,
                                                       const std::string& key) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_array()) {
            fail(path + "." + key, "must be an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                fail(path + "." + key, "must be an array of numbers");
                return std::nullopt;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::optional<std::string> get_string(const json& obj, const std::string& path,
                                          const std::string& key) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_string()) {
            fail(path + "." + key, "must be a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }
};

// A coefficient is a plain number or an [re, im] pair.
std::optional<std::complex<double>> parse_complex(const json& v) {
    if (v.is_number()) return std::complex<double>(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return std::complex<double>(v[0].get<double>(), v[1].get<double>());
    return std::nullopt;
}

DriveSpec parse_drive(const json& obj, const std::string& path, const DriveSpec& base,
                      bool require_core, Validator& v) {
    DriveSpec d = base;
    if (!v.require_object(obj, path)) return d;
    v.reject_unknown_keys(obj, path, {"l", "rabi", "phase", "eta", "detuning", "transition"});

    if (auto l = v.get_int(obj, path, "l")) d.l = *l;
    else if (require_core && !obj.contains("l")) v.fail(path + ".l", "required");

    if (auto rabi = v.get_number(obj, path, "rabi")) d.rabi = *rabi;
    else if (require_core && !obj.contains("rabi")) v.fail(path + ".rabi", "required");

    if (auto eta = v.get_number(obj, path, "eta")) d.eta = *eta;
    else if (require_core && !obj.contains("eta")) v.fail(path + ".eta", "required");

    if (auto phase = v.get_number(obj, path, "phase")) d.phase = *phase;
    if (auto det = v.get_number(obj, path, "detuning")) d.detuning = *det;
    if (auto tr = v.get_int(obj, path, "transition")) d.transition = *tr;

    if (obj.contains("rabi") || require_core) {
        if (!(d.rabi > 0.0)) v.fail(path + ".rabi", "must be positive");
    }
    if (obj.contains("eta") || require_core) {
        if (d.eta == 0.0)
            v.fail(path + ".eta",
                   "must be positive (the point-particle limit has no sideband coupling)");
        else if (d.eta < 0.0)
            v.fail(path + ".eta", "must be positive");
    }
    if (d.transition < 0) v.fail(path + ".transition", "must be nonnegative");
    return d;
}

InitialStateSpec parse_initial_state(const json& v0, Validator& v) {
    InitialStateSpec spec;
    if (v0.is_string()) {
        const std::string name = v0.get<std::string>();
        if (name == "ground") spec.kind = InitialStateSpec::Kind::Ground;
        else if (name == "upper") spec.kind = InitialStateSpec::Kind::Upper;
        else v.fail("initial_state", "unknown preset '" + name + "' (use ground or upper)");
        return spec;
    }
    if (v0.is_object()) {
        v.reject_unknown_keys(v0, "initial_state", {"superposition", "amplitudes"});
        if (v0.contains("superposition") == v0.contains("amplitudes")) {
            v.fail("initial_state", "give exactly one of superposition / amplitudes");
            return spec;
        }
        const bool is_sup = v0.contains("superposition");
        const json& arr = is_sup ? v0.at("superposition") : v0.at("amplitudes");
        if (!arr.is_array()) {
            v.fail("initial_state", "coefficients must be an array");
            return spec;
        }
        spec.kind = is_sup ? InitialStateSpec::Kind::Superposition
                           : InitialStateSpec::Kind::Amplitudes;
        for (const auto& e : arr) {
            auto c = parse_complex(e);
            if (!c) {
                v.fail("initial_state", "each coefficient must be a number or an [re, im] pair");
                return spec;
            }
            spec.amplitudes.push_back(*c);
        }
        if (is_sup && spec.amplitudes.size() != 2)
            v.fail("initial_state.superposition", "need exactly two internal coefficients");
        return spec;
    }
    v.fail("initial_state", "must be a preset name or an object");
    return spec;
}

ScenarioConfig parse_scenario(const json& j, Validator& v) {
    ScenarioConfig cfg;
    if (!v.require_object(j, "config")) return cfg;
    v.reject_unknown_keys(j, "config",
                          {"trap", "ladder", "drive", "schedule", "initial_state", "integrator",
                           "outputs"});

    // trap
    if (j.contains("trap")) {
        const json& t = j.at("trap");
        if (v.require_object(t, "trap")) {
            v.reject_unknown_keys(t, "trap", {"n_max", "r0"});
            if (auto n = v.get_int(t, "trap", "n_max")) cfg.n_max = *n;
            else if (!t.contains("n_max")) v.fail("trap.n_max", "required");
            if (auto r = v.get_number(t, "trap", "r0")) cfg.r0 = *r;
            if (cfg.n_max < 0) v.fail("trap.n_max", "must be nonnegative");
            if (!(cfg.r0 > 0.0)) v.fail("trap.r0", "must be positive");
        }
    } else {
        v.fail("trap", "required");
    }

    // ladder
    if (j.contains("ladder")) {
        const json& t = j.at("ladder");
        if (v.require_object(t, "ladder")) {
            v.reject_unknown_keys(
                t, "ladder", {"m_base", "level_count", "transition_frequencies", "dipole_scales"});
            if (auto m = v.get_int(t, "ladder", "m_base")) cfg.m_base = *m;
            if (auto lc = v.get_int(t, "ladder", "level_count")) cfg.level_count = *lc;
            if (auto f = v.get_number_list(t, "ladder", "transition_frequencies"))
                cfg.transition_frequencies = *f;
            if (auto d = v.get_number_list(t, "ladder", "dipole_scales")) cfg.dipole_scales = *d;

            if (cfg.m_base < 0) v.fail("ladder.m_base", "must be nonnegative");
            if (cfg.level_count < 2) v.fail("ladder.level_count", "need at least two levels");
            if (!cfg.transition_frequencies.empty()) {
                if (cfg.transition_frequencies.size() !=
                    static_cast<std::size_t>(cfg.level_count - 1))
                    v.fail("ladder.transition_frequencies",
                           "need level_count-1 entries, got " +
                               std::to_string(cfg.transition_frequencies.size()));
                for (double f : cfg.transition_frequencies)
                    if (!(f > 0.0))
                        v.fail("ladder.transition_frequencies", "entries must be positive");
            }
            if (cfg.dipole_scales) {
                if (cfg.dipole_scales->size() != static_cast<std::size_t>(cfg.level_count - 1))
                    v.fail("ladder.dipole_scales", "need level_count-1 entries");
                for (double d : *cfg.dipole_scales)
                    if (!(d > 0.0)) v.fail("ladder.dipole_scales", "entries must be positive");
            }
        }
    }

    // drive
    if (j.contains("drive")) {
        cfg.drive = parse_drive(j.at("drive"), "drive", DriveSpec{}, true, v);
    } else {
        v.fail("drive", "required");
    }
    if (cfg.level_count >= 2 && cfg.drive.transition >= cfg.level_count - 1)
        v.fail("drive.transition", "ladder has only " + std::to_string(cfg.level_count - 1) +
                                       " transitions");

    // schedule
    if (j.contains("schedule")) {
        const json& arr = j.at("schedule");
        if (!arr.is_array()) {
            v.fail("schedule", "must be an array of pulse steps");
        } else {
            int idx = 0;
            for (const auto& s : arr) {
                const std::string path = "schedule[" + std::to_string(idx) + "]";
                PulseStep step;
                step.drive = cfg.drive;
                if (!s.is_object()) {
                    v.fail(path, "must be an object");
                    ++idx;
                    continue;
                }
                v.reject_unknown_keys(s, path, {"area", "duration", "model", "drive"});
                if (auto a = v.get_number(s, path, "area")) step.area = *a;
                if (auto d = v.get_number(s, path, "duration")) step.duration = *d;
                if (step.area && step.duration)
                    v.fail(path, "give area or duration, not both");
                if (!step.area && !step.duration) v.fail(path, "give area or duration");
                if (step.duration && !(*step.duration >= 0.0))
                    v.fail(path + ".duration", "must be nonnegative");
                if (auto m = v.get_string(s, path, "model")) {
                    if (*m == "RWA") step.model = EvolutionModel::RWA;
                    else if (*m == "FULL") step.model = EvolutionModel::FULL;
                    else v.fail(path + ".model", "must be RWA or FULL");
                }
                if (s.contains("drive"))
                    step.drive = parse_drive(s.at("drive"), path + ".drive", cfg.drive, false, v);
                if (cfg.level_count >= 2 && step.drive.transition >= cfg.level_count - 1)
                    v.fail(path + ".drive.transition",
                           "ladder has only " + std::to_string(cfg.level_count - 1) +
                               " transitions");
                if (step.model == EvolutionModel::FULL && step.area && *step.area < 0.0)
                    v.fail(path + ".area",
                           "FULL-model steps integrate forward only, area must be nonnegative");
                cfg.schedule.push_back(std::move(step));
                ++idx;
            }
        }
    }

    // initial_state
    if (j.contains("initial_state")) cfg.initial_state = parse_initial_state(j.at("initial_state"), v);

    // integrator
    if (j.contains("integrator")) {
        const json& t = j.at("integrator");
        if (v.require_object(t, "integrator")) {
            v.reject_unknown_keys(t, "integrator", {"tolerance", "max_step"});
            if (auto tol = v.get_number(t, "integrator", "tolerance"))
                cfg.integrator.tolerance = *tol;
            if (auto ms = v.get_number(t, "integrator", "max_step")) cfg.integrator.max_step = *ms;
            if (!(cfg.integrator.tolerance > 0.0))
                v.fail("integrator.tolerance", "must be positive");
            if (!(cfg.integrator.max_step > 0.0)) v.fail("integrator.max_step", "must be positive");
        }
    }

    // outputs
    if (j.contains("outputs")) {
        const json& t = j.at("outputs");
        if (v.require_object(t, "outputs")) {
            v.reject_unknown_keys(t, "outputs",
                                  {"trajectory_csv", "records_json", "analysis_json",
                                   "samples_per_step", "sample_times"});
            if (auto s = v.get_string(t, "outputs", "trajectory_csv")) cfg.outputs.trajectory_csv = *s;
            if (auto s = v.get_string(t, "outputs", "records_json")) cfg.outputs.records_json = *s;
            if (auto s = v.get_string(t, "outputs", "analysis_json")) cfg.outputs.analysis_json = *s;
            if (auto n = v.get_int(t, "outputs", "samples_per_step"))
                cfg.outputs.samples_per_step = *n;
            if (auto ts = v.get_number_list(t, "outputs", "sample_times"))
                cfg.outputs.sample_times = *ts;
            if (cfg.outputs.samples_per_step < 0)
                v.fail("outputs.samples_per_step", "must be nonnegative");
            for (double ts : cfg.outputs.sample_times)
                if (ts < 0.0) v.fail("outputs.sample_times", "entries must be nonnegative");
        }
    }

    // cross-field checks
    if (cfg.initial_state.kind == InitialStateSpec::Kind::Superposition &&
        !cfg.initial_state.amplitudes.empty()) {
        double n2 = 0.0;
        for (auto c : cfg.initial_state.amplitudes) n2 += std::norm(c);
        if (std::abs(n2 - 1.0) > 1e-9)
            v.fail("initial_state.superposition", "coefficients must be normalized");
    }
    if (cfg.initial_state.kind == InitialStateSpec::Kind::Amplitudes && cfg.n_max >= 0 &&
        cfg.level_count >= 2) {
        const std::size_t dim = static_cast<std::size_t>(cfg.level_count) *
                                static_cast<std::size_t>((cfg.n_max + 1) * (cfg.n_max + 2) / 2);
        if (cfg.initial_state.amplitudes.size() != dim)
            v.fail("initial_state.amplitudes",
                   "need " + std::to_string(dim) + " entries for this basis, got " +
                       std::to_string(cfg.initial_state.amplitudes.size()));
        double n2 = 0.0;
        for (auto c : cfg.initial_state.amplitudes) n2 += std::norm(c);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
            v.fail("initial_state.amplitudes", "vector must be normalized");
    }

    // accepted-with-warning settings
    if (v.violations.empty()) {
        if (std::abs(cfg.drive.l) > cfg.n_max)
            cfg.warnings.push_back(
                "drive.l: |l| exceeds trap.n_max, sideband coupling is identically zero on the "
                "truncated space");
        if (cfg.drive.rwa_flagged())
            cfg.warnings.push_back(
                "drive: eta^|l| * rabi >= 0.1 trap units, resolved-sideband treatment is "
                "questionable");
    }
    return cfg;
}

}  // namespace

InternalLadder ScenarioConfig::make_ladder() const {
    return InternalLadder::make(m_base, level_count, transition_frequencies, dipole_scales);
}

CompositeBasis ScenarioConfig::make_basis() const {
    return CompositeBasis(make_ladder(), FockBasis::build(n_max));
}

StateVector ScenarioConfig::make_initial_state(const CompositeBasis& basis) const {
    switch (initial_state.kind) {
        case InitialStateSpec::Kind::Ground:
            return StateVector::basis_state(basis, 0, {0, 0});
        case InitialStateSpec::Kind::Upper:
            return StateVector::basis_state(basis, 1, {0, 0});
        case InitialStateSpec::Kind::Superposition: {
            Eigen::VectorXcd amps =
                Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
            const std::size_t ground = basis.trap().index_of({0, 0});
            amps(static_cast<Eigen::Index>(basis.index(0, ground))) = initial_state.amplitudes[0];
            amps(static_cast<Eigen::Index>(basis.index(1, ground))) = initial_state.amplitudes[1];
            return StateVector::create(basis.tag(), std::move(amps));
        }
        case InitialStateSpec::Kind::Amplitudes: {
            Eigen::VectorXcd amps(static_cast<Eigen::Index>(initial_state.amplitudes.size()));
            for (std::size_t i = 0; i < initial_state.amplitudes.size(); ++i)
                amps(static_cast<Eigen::Index>(i)) = initial_state.amplitudes[i];
            return StateVector::create(basis.tag(), std::move(amps));
        }
    }
    throw std::logic_error("make_initial_state: unreachable");
}

ScenarioConfig parse_config(const nlohmann::json& j) {
    Validator v;
    ScenarioConfig cfg = parse_scenario(j, v);
    if (!v.violations.empty()) throw ConfigError(std::move(v.violations));
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot open file"});
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError({path.string() + ": " + e.what()});
    }
    return parse_config(j);
}

ScenarioConfig SweepConfig::scenario_for(double value) const {
    ScenarioConfig cfg = base;
    if (parameter == "drive.rabi") cfg.drive.rabi = value;
    else if (parameter == "drive.eta") cfg.drive.eta = value;
    else if (parameter == "drive.detuning") cfg.drive.detuning = value;
    else if (parameter == "drive.phase") cfg.drive.phase = value;
    else if (parameter == "integrator.tolerance") cfg.integrator.tolerance = value;
    else throw std::logic_error("SweepConfig: unknown parameter " + parameter);
    // steps inherit the swept drive unless they carried their own
    for (auto& step : cfg.schedule) {
        if (parameter == "drive.rabi" && step.drive.rabi == base.drive.rabi)
            step.drive.rabi = value;
        else if (parameter == "drive.eta" && step.drive.eta == base.drive.eta)
            step.drive.eta = value;
        else if (parameter == "drive.detuning" && step.drive.detuning == base.drive.detuning)
            step.drive.detuning = value;
        else if (parameter == "drive.phase" && step.drive.phase == base.drive.phase)
            step.drive.phase = value;
    }
    return cfg;
}

SweepConfig parse_sweep_config(const nlohmann::json& j) {
    Validator v;
    SweepConfig sweep;
    if (!j.is_object()) throw ConfigError({"sweep config must be an object"});
    v.reject_unknown_keys(j, "sweep", {"base", "parameter", "values"});
    if (!j.contains("base")) v.fail("sweep.base", "required");
    if (!j.contains("parameter")) v.fail("sweep.parameter", "required");
    if (!j.contains("values")) v.fail("sweep.values", "required");
    if (!v.violations.empty()) throw ConfigError(std::move(v.violations));

    sweep.base = parse_scenario(j.at("base"), v);
    if (auto p = v.get_string(j, "sweep", "parameter")) {
        static const std::set<std::string> allowed = {
            "drive.rabi", "drive.eta", "drive.detuning", "drive.phase", "integrator.tolerance"};
        if (!allowed.count(*p))
            v.fail("sweep.parameter", "'" + *p + "' is not sweepable");
        else
            sweep.parameter = *p;
    }
    if (auto vals = v.get_number_list(j, "sweep", "values")) sweep.values = *vals;
    if (sweep.values.empty()) v.fail("sweep.values", "need at least one value");
    if (!v.violations.empty()) throw ConfigError(std::move(v.violations));
    return sweep;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot open file"});
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError({path.string() + ": " + e.what()});
    }
    return parse_sweep_config(j);
}

}  // namespace lgtrap
