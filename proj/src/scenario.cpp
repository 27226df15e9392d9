#include "chirpsim/scenario.hpp"

#include "chirpsim/errors.hpp"
#include "chirpsim/svg_plot.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chirpsim {

using nlohmann::json;

namespace {

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path.empty() ? message : path + ": " + message);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& path) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(join_path(path, key), "unknown key");
    }
}

double get_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) fail(join_path(path, key), "missing required key");
    if (!j.at(key).is_number()) fail(join_path(path, key), "expected a number");
    return j.at(key).get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback,
                     const std::string& path) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(join_path(path, key), "expected a number");
    return j.at(key).get<double>();
}

std::vector<double> get_number_list(const json& j, const std::string& key,
                                    const std::string& path) {
    if (!j.contains(key) || !j.at(key).is_array())
        fail(join_path(path, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) fail(join_path(path, key), "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

/// Coupling maps are JSON objects with "i-j" keys.
std::map<std::pair<int, int>, double> parse_coupling_map(const json& j, const std::string& path,
                                                         double unit_scale) {
    require_object(j, path);
    std::map<std::pair<int, int>, double> out;
    for (const auto& [key, value] : j.items()) {
        int i = 0, k = 0;
        if (std::sscanf(key.c_str(), "%d-%d", &i, &k) != 2)
            fail(join_path(path, key), "coupling keys must look like \"1-3\"");
        if (!value.is_number()) fail(join_path(path, key), "expected a number");
        if (i > k) std::swap(i, k);
        out[{i, k}] = value.get<double>() * unit_scale;
    }
    return out;
}

SystemSpec parse_system(const json& j, const std::string& path) {
    require_object(j, path);
    if (j.contains("preset")) {
        const std::string preset = j.at("preset").get<std::string>();
        if (preset == "anthracene") {
            check_keys(j, {"preset"}, path);
            return anthracene_preset();
        }
        if (preset == "tier") {
            check_keys(j,
                       {"preset", "detunings_rad_per_ps", "detunings_ghz",
                        "couplings_rad_per_ps", "couplings_ghz", "bright_weights"},
                       path);
            std::vector<double> detunings;
            if (j.contains("detunings_rad_per_ps") == j.contains("detunings_ghz"))
                fail(path, "tier preset needs exactly one of detunings_rad_per_ps / detunings_ghz");
            if (j.contains("detunings_rad_per_ps")) {
                detunings = get_number_list(j, "detunings_rad_per_ps", path);
            } else {
                for (double d : get_number_list(j, "detunings_ghz", path))
                    detunings.push_back(ghz_to_rad_per_ps(d));
            }
            std::map<std::pair<int, int>, double> couplings;
            if (j.contains("couplings_rad_per_ps") && j.contains("couplings_ghz"))
                fail(path, "give couplings in one unit only");
            if (j.contains("couplings_rad_per_ps"))
                couplings = parse_coupling_map(j.at("couplings_rad_per_ps"),
                                              join_path(path, "couplings_rad_per_ps"), 1.0);
            else if (j.contains("couplings_ghz"))
                couplings = parse_coupling_map(j.at("couplings_ghz"),
                                              join_path(path, "couplings_ghz"),
                                              ghz_to_rad_per_ps(1.0));
            std::vector<double> weights = {1.0, 1.0, 1.0};
            if (j.contains("bright_weights")) weights = get_number_list(j, "bright_weights", path);
            return tier_preset(detunings, couplings, weights);
        }
        fail(join_path(path, "preset"), "unknown preset: " + preset);
    }

    check_keys(j,
               {"n_levels", "detunings_rad_per_ps", "detunings_ghz", "couplings_rad_per_ps",
                "couplings_ghz", "bright", "bright_weights"},
               path);
    SystemSpec sys;
    if (!j.contains("n_levels")) fail(join_path(path, "n_levels"), "missing required key");
    sys.n_levels = j.at("n_levels").get<int>();
    if (j.contains("detunings_rad_per_ps") == j.contains("detunings_ghz"))
        fail(path, "need exactly one of detunings_rad_per_ps / detunings_ghz");
    if (j.contains("detunings_rad_per_ps")) {
        sys.detunings = get_number_list(j, "detunings_rad_per_ps", path);
    } else {
        for (double d : get_number_list(j, "detunings_ghz", path))
            sys.detunings.push_back(ghz_to_rad_per_ps(d));
    }
    if (j.contains("couplings_rad_per_ps") && j.contains("couplings_ghz"))
        fail(path, "give couplings in one unit only");
    if (j.contains("couplings_rad_per_ps"))
        sys.couplings = parse_coupling_map(j.at("couplings_rad_per_ps"),
                                          join_path(path, "couplings_rad_per_ps"), 1.0);
    else if (j.contains("couplings_ghz"))
        sys.couplings = parse_coupling_map(j.at("couplings_ghz"),
                                          join_path(path, "couplings_ghz"),
                                          ghz_to_rad_per_ps(1.0));
    if (!j.contains("bright")) fail(join_path(path, "bright"), "missing required key");
    for (const auto& v : j.at("bright")) sys.bright.push_back(v.get<int>());
    if (j.contains("bright_weights"))
        sys.bright_weights = get_number_list(j, "bright_weights", path);
    else
        sys.bright_weights.assign(sys.bright.size(), 1.0);
    sys.validate();
    return sys;
}

const std::vector<std::string> kChirpKeys = {"b0_rad",         "b1_rad_per_ps",
                                             "b2_rad_per_ps2", "b3_rad_per_ps3",
                                             "b4_rad_per_ps4", "b5_rad_per_ps5"};

PulseSpec parse_pulse(const json& j, const std::string& path) {
    check_keys(j,
               {"envelope", "fwhm_ps", "peak_rabi_rad_per_ps", "peak_rabi_ghz", "photon_order",
                "center_time_ps", "chirp"},
               path);
    PulseSpec pulse;
    if (!j.contains("envelope")) fail(join_path(path, "envelope"), "missing required key");
    pulse.envelope_kind = envelope_kind_from_string(j.at("envelope").get<std::string>());
    pulse.fwhm = get_number(j, "fwhm_ps", path);
    if (j.contains("peak_rabi_rad_per_ps") == j.contains("peak_rabi_ghz"))
        fail(path, "need exactly one of peak_rabi_rad_per_ps / peak_rabi_ghz");
    pulse.peak_rabi = j.contains("peak_rabi_rad_per_ps")
                          ? get_number(j, "peak_rabi_rad_per_ps", path)
                          : ghz_to_rad_per_ps(get_number(j, "peak_rabi_ghz", path));
    pulse.photon_order = static_cast<int>(get_number_or(j, "photon_order", 1.0, path));
    pulse.center_time = get_number_or(j, "center_time_ps", 0.0, path);
    if (j.contains("chirp")) {
        const json& c = j.at("chirp");
        const std::string chirp_path = join_path(path, "chirp");
        check_keys(c, kChirpKeys, chirp_path);
        std::vector<double> b(ChirpCoefficients::max_order, 0.0);
        for (std::size_t n = 0; n < kChirpKeys.size(); ++n)
            b[n] = get_number_or(c, kChirpKeys[n], 0.0, chirp_path);
        pulse.chirp = ChirpCoefficients(b);
    }
    try {
        pulse.validate();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return pulse;
}

TimeGrid parse_grid(const json& j, const std::string& path, const SystemSpec& sys,
                    const PulseSpec& pulse) {
    check_keys(j, {"t_start_ps", "t_end_ps", "dt_ps"}, path);
    TimeGrid grid;
    grid.t_start = get_number(j, "t_start_ps", path);
    grid.t_end = get_number(j, "t_end_ps", path);
    grid.dt = j.contains("dt_ps") ? get_number(j, "dt_ps", path)
                                  : recommended_dt(sys, pulse, grid.t_start, grid.t_end);
    try {
        grid.validate();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return grid;
}

DensityMatrix parse_initial_state(const json& j, const std::string& path, int n_levels) {
    if (j.is_number_integer()) {
        const int level = j.get<int>();
        if (level < 0 || level >= n_levels) fail(path, "initial basis state out of range");
        return basis_state(n_levels, level);
    }
    check_keys(j, {"real", "imag"}, path);
    if (!j.contains("real")) fail(join_path(path, "real"), "missing required key");
    DensityMatrix rho = DensityMatrix::Zero(n_levels, n_levels);
    const json& re = j.at("real");
    if (!re.is_array() || static_cast<int>(re.size()) != n_levels)
        fail(join_path(path, "real"), "expected an n_levels x n_levels matrix");
    for (int r = 0; r < n_levels; ++r)
        for (int c = 0; c < n_levels; ++c)
            rho(r, c) = re.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    if (j.contains("imag")) {
        const json& im = j.at("imag");
        for (int r = 0; r < n_levels; ++r)
            for (int c = 0; c < n_levels; ++c)
                rho(r, c) += std::complex<double>(0.0, im.at(static_cast<std::size_t>(r))
                                                            .at(static_cast<std::size_t>(c))
                                                            .get<double>());
    }
    try {
        validate_density_matrix(rho);
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return rho;
}

AnalysisRequest parse_analysis(const json& j, const std::string& path) {
    require_object(j, path);
    if (!j.contains("type")) fail(join_path(path, "type"), "missing required key");
    AnalysisRequest req;
    req.type = j.at("type").get<std::string>();
    auto window = [&](bool required) {
        if (!j.contains("window_ps")) {
            if (required) fail(join_path(path, "window_ps"), "missing required key");
            return;
        }
        const auto w = get_number_list(j, "window_ps", path);
        if (w.size() != 2) fail(join_path(path, "window_ps"), "expected [start, end]");
        req.window_start = w[0];
        req.window_end = w[1];
    };
    if (req.type == "dressed_states") {
        check_keys(j, {"type"}, path);
    } else if (req.type == "adiabaticity") {
        check_keys(j, {"type", "max_peak"}, path);
        if (j.contains("max_peak")) req.max_peak = get_number(j, "max_peak", path);
    } else if (req.type == "locking") {
        check_keys(j, {"type", "level", "window_ps", "expect_locked"}, path);
        req.level = static_cast<int>(get_number(j, "level", path));
        window(true);
        if (j.contains("expect_locked")) req.expect_locked = j.at("expect_locked").get<bool>();
    } else if (req.type == "beat_spectrum") {
        check_keys(j, {"type", "level", "window_ps", "expect_peaks_ghz"}, path);
        req.level = static_cast<int>(get_number(j, "level", path));
        window(true);
        if (j.contains("expect_peaks_ghz"))
            req.expect_peaks_ghz = get_number_list(j, "expect_peaks_ghz", path);
    } else if (req.type == "superposition") {
        check_keys(j, {"type", "members", "at_ps", "max_deviation"}, path);
        if (!j.contains("members")) fail(join_path(path, "members"), "missing required key");
        for (const auto& v : j.at("members")) req.members.push_back(v.get<int>());
        req.at_time = get_number_or(j, "at_ps", 0.0, path);
        if (j.contains("max_deviation")) req.max_deviation = get_number(j, "max_deviation", path);
    } else if (req.type == "classify") {
        check_keys(j, {"type", "threshold", "expect_label"}, path);
        req.threshold = get_number_or(j, "threshold", 0.9, path);
        if (j.contains("expect_label"))
            req.expect_label = static_cast<int>(get_number(j, "expect_label", path));
    } else {
        fail(join_path(path, "type"), "unknown analysis type: " + req.type);
    }
    return req;
}

json chirp_to_json(const ChirpCoefficients& chirp) {
    json c = json::object();
    for (std::size_t n = 0; n < kChirpKeys.size(); ++n)
        c[kChirpKeys[n]] = chirp.b[n];
    return c;
}

json coupling_map_to_json(const std::map<std::pair<int, int>, double>& couplings) {
    json out = json::object();
    for (const auto& [key, v] : couplings)
        out[std::to_string(key.first) + "-" + std::to_string(key.second)] = v;
    return out;
}

json system_to_json(const SystemSpec& sys) {
    json out;
    out["n_levels"] = sys.n_levels;
    out["detunings_rad_per_ps"] = sys.detunings;
    out["couplings_rad_per_ps"] = coupling_map_to_json(sys.couplings);
    out["bright"] = sys.bright;
    out["bright_weights"] = sys.bright_weights;
    return out;
}

json pulse_to_json(const PulseSpec& pulse) {
    json out;
    out["envelope"] = to_string(pulse.envelope_kind);
    out["fwhm_ps"] = pulse.fwhm;
    out["peak_rabi_rad_per_ps"] = pulse.peak_rabi;
    out["photon_order"] = pulse.photon_order;
    out["center_time_ps"] = pulse.center_time;
    out["chirp"] = chirp_to_json(pulse.chirp);
    return out;
}

json analysis_to_json(const AnalysisRequest& req) {
    json out;
    out["type"] = req.type;
    if (req.type == "locking" || req.type == "beat_spectrum") {
        out["level"] = req.level;
        out["window_ps"] = {req.window_start, req.window_end};
    }
    if (req.type == "locking" && req.expect_locked) out["expect_locked"] = *req.expect_locked;
    if (req.type == "beat_spectrum" && !req.expect_peaks_ghz.empty())
        out["expect_peaks_ghz"] = req.expect_peaks_ghz;
    if (req.type == "adiabaticity" && req.max_peak) out["max_peak"] = *req.max_peak;
    if (req.type == "superposition") {
        out["members"] = req.members;
        out["at_ps"] = req.at_time;
        if (req.max_deviation) out["max_deviation"] = *req.max_deviation;
    }
    if (req.type == "classify") {
        out["threshold"] = req.threshold;
        if (req.expect_label) out["expect_label"] = *req.expect_label;
    }
    return out;
}

json initial_state_to_json(const DensityMatrix& rho) {
    // pure basis state collapses to its index
    const int n = static_cast<int>(rho.rows());
    for (int i = 0; i < n; ++i) {
        if (std::abs(rho(i, i).real() - 1.0) < 1e-15) {
            bool pure_basis = true;
            for (int r = 0; r < n && pure_basis; ++r)
                for (int c = 0; c < n && pure_basis; ++c)
                    if (!(r == i && c == i) && std::abs(rho(r, c)) > 0.0) pure_basis = false;
            if (pure_basis) return json(i);
        }
    }
    json re = json::array(), im = json::array();
    for (int r = 0; r < n; ++r) {
        json re_row = json::array(), im_row = json::array();
        for (int c = 0; c < n; ++c) {
            re_row.push_back(rho(r, c).real());
            im_row.push_back(rho(r, c).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    return json{{"real", re}, {"imag", im}};
}

json scenario_to_json(const Scenario& s) {
    json out;
    out["name"] = s.name;
    out["system"] = system_to_json(s.system);
    out["pulse"] = pulse_to_json(s.pulse);
    out["grid"] = {{"t_start_ps", s.grid.t_start}, {"t_end_ps", s.grid.t_end}, {"dt_ps", s.grid.dt}};
    out["initial_state"] = initial_state_to_json(s.initial_state);
    json analyses = json::array();
    for (const auto& a : s.analyses) analyses.push_back(analysis_to_json(a));
    out["analyses"] = analyses;
    out["outputs"] = {{"trajectory_csv", s.outputs.trajectory_csv},
                      {"analysis_json", s.outputs.analysis_json},
                      {"plots", s.outputs.plots}};
    return out;
}

Scenario parse_scenario_json(const json& j) {
    check_keys(j, {"name", "system", "pulse", "grid", "initial_state", "analyses", "outputs"}, "");
    Scenario s;
    if (!j.contains("name")) fail("name", "missing required key");
    s.name = j.at("name").get<std::string>();
    if (!j.contains("system")) fail("system", "missing required key");
    s.system = parse_system(j.at("system"), "system");
    if (!j.contains("pulse")) fail("pulse", "missing required key");
    s.pulse = parse_pulse(j.at("pulse"), "pulse");
    if (!j.contains("grid")) fail("grid", "missing required key");
    s.grid = parse_grid(j.at("grid"), "grid", s.system, s.pulse);
    s.initial_state = j.contains("initial_state")
                          ? parse_initial_state(j.at("initial_state"), "initial_state",
                                                s.system.n_levels)
                          : basis_state(s.system.n_levels, 0);
    if (j.contains("analyses")) {
        if (!j.at("analyses").is_array()) fail("analyses", "expected an array");
        std::size_t idx = 0;
        for (const auto& a : j.at("analyses"))
            s.analyses.push_back(parse_analysis(a, "analyses[" + std::to_string(idx++) + "]"));
    }
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        check_keys(o, {"trajectory_csv", "analysis_json", "plots"}, "outputs");
        if (o.contains("trajectory_csv")) s.outputs.trajectory_csv = o.at("trajectory_csv").get<bool>();
        if (o.contains("analysis_json")) s.outputs.analysis_json = o.at("analysis_json").get<bool>();
        if (o.contains("plots")) s.outputs.plots = o.at("plots").get<bool>();
    }
    s.resolved_json = scenario_to_json(s).dump(2);
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Scenario parse_scenario_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
    }
    try {
        return parse_scenario_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot read scenario file: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_scenario_string(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) { return scenario.resolved_json; }

namespace {

struct AnalysisOutcome {
    json report;
    bool verdicts_pass = true;
};

AnalysisOutcome run_analyses(const Scenario& scenario, const Trajectory& traj) {
    AnalysisOutcome outcome;
    outcome.report = json::array();
    std::optional<DressedTrajectory> dressed;
    auto ensure_dressed = [&]() -> const DressedTrajectory& {
        if (!dressed) dressed = dressed_states(traj);
        return *dressed;
    };
    for (const auto& req : scenario.analyses) {
        json entry = analysis_to_json(req);
        if (req.type == "dressed_states") {
            const auto& d = ensure_dressed();
            entry["final_energies_rad_per_ps"] = d.energies.back();
        } else if (req.type == "adiabaticity") {
            const AdiabaticityReport report = adiabaticity(ensure_dressed(), traj);
            entry["peak"] = report.peak;
            entry["peak_time_ps"] = report.peak_time;
            entry["near_crossing"] = report.near_crossing;
            if (req.max_peak) {
                const bool ok = report.peak <= *req.max_peak;
                entry["verdict"] = ok;
                outcome.verdicts_pass = outcome.verdicts_pass && ok;
            }
        } else if (req.type == "locking") {
            const LockingReport report =
                detect_locking(traj, req.level, req.window_start, req.window_end);
            entry["mean"] = report.mean;
            entry["peak_to_peak"] = report.peak_to_peak;
            entry["locked"] = report.locked;
            if (req.expect_locked) {
                const bool ok = report.locked == *req.expect_locked;
                entry["verdict"] = ok;
                outcome.verdicts_pass = outcome.verdicts_pass && ok;
            }
        } else if (req.type == "beat_spectrum") {
            const BeatSpectrum spec =
                beat_spectrum(traj, req.level, req.window_start, req.window_end);
            entry["bin_ghz"] = spec.bin_ghz;
            entry["window_overlaps_pulse"] = spec.window_overlaps_pulse;
            json peaks = json::array();
            for (const auto& p : spec.peaks)
                peaks.push_back({{"frequency_ghz", p.frequency_ghz}, {"amplitude", p.amplitude}});
            entry["peaks"] = peaks;
            if (!req.expect_peaks_ghz.empty()) {
                bool ok = true;
                for (double expect : req.expect_peaks_ghz) {
                    bool found = false;
                    for (const auto& p : spec.peaks)
                        if (std::abs(p.frequency_ghz - expect) <= spec.bin_ghz) found = true;
                    ok = ok && found;
                }
                entry["verdict"] = ok;
                outcome.verdicts_pass = outcome.verdicts_pass && ok;
            }
        } else if (req.type == "superposition") {
            // nearest stored sample to the requested time
            std::size_t best = 0;
            for (std::size_t i = 1; i < traj.n_samples(); ++i)
                if (std::abs(traj.times[i] - req.at_time) <
                    std::abs(traj.times[best] - req.at_time))
                    best = i;
            const SuperpositionReport report = superposition_quality(
                traj.rhos[best], std::set<int>(req.members.begin(), req.members.end()));
            entry["sample_time_ps"] = traj.times[best];
            entry["max_population_deviation"] = report.max_population_deviation;
            entry["min_pairwise_coherence"] = report.min_pairwise_coherence;
            if (req.max_deviation) {
                const bool ok = report.max_population_deviation <= *req.max_deviation;
                entry["verdict"] = ok;
                outcome.verdicts_pass = outcome.verdicts_pass && ok;
            }
        } else if (req.type == "classify") {
            const std::optional<int> label = classify_logical(traj.final_rho(), req.threshold);
            if (label)
                entry["label"] = *label;
            else
                entry["label"] = nullptr;
            if (req.expect_label) {
                const bool ok = label && *label == *req.expect_label;
                entry["verdict"] = ok;
                outcome.verdicts_pass = outcome.verdicts_pass && ok;
            }
        }
        outcome.report.push_back(entry);
    }
    return outcome;
}

std::string trajectory_csv(const Scenario& scenario, const Trajectory& traj) {
    std::ostringstream out;
    out << "# tool_version: " << kToolVersion << "\n";
    out << "# dt_ps: " << format_double(traj.grid.dt) << "\n";
    out << "# scenario: " << json::parse(scenario.resolved_json).dump() << "\n";
    const int n = traj.system.n_levels;
    out << "time_ps";
    for (int i = 0; i < n; ++i) out << ",pop_" << i;
    for (int i = 1; i < n; ++i) out << ",abs_rho_0" << i;
    out << "\n";
    for (std::size_t s = 0; s < traj.n_samples(); ++s) {
        out << format_double(traj.times[s]);
        for (int i = 0; i < n; ++i)
            out << "," << format_double(traj.populations[s][static_cast<std::size_t>(i)]);
        for (int i = 1; i < n; ++i)
            out << "," << format_double(traj.coherences[s][static_cast<std::size_t>(i - 1)]);
        out << "\n";
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text,
                std::vector<std::string>& written) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open " + path + " for writing");
    file << text;
    written.push_back(path);
}

void write_plots(const Scenario& scenario, const Trajectory& traj, const std::string& out_dir,
                 std::vector<std::string>& written) {
    const int n = traj.system.n_levels;
    SvgPlot pops(scenario.name + ": populations", "time (ps)", "population");
    for (int i = 0; i < n; ++i) {
        std::vector<double> y;
        y.reserve(traj.n_samples());
        for (const auto& p : traj.populations) y.push_back(p[static_cast<std::size_t>(i)]);
        pops.add_series("pop " + std::to_string(i), traj.times, y);
    }
    const std::string pops_path = out_dir + "/" + scenario.name + "_populations.svg";
    pops.write(pops_path);
    written.push_back(pops_path);

    const DressedTrajectory dressed = dressed_states(traj);
    SvgPlot energies(scenario.name + ": dressed energies", "time (ps)", "energy (rad/ps)");
    SvgPlot characters(scenario.name + ": dressed character", "time (ps)",
                       "|<bright|branch>|^2");
    const int bright = traj.system.bright.front();
    for (int b = 0; b < n; ++b) {
        std::vector<double> e, c;
        e.reserve(dressed.times.size());
        c.reserve(dressed.times.size());
        for (std::size_t s = 0; s < dressed.times.size(); ++s) {
            e.push_back(dressed.energies[s][static_cast<std::size_t>(b)]);
            c.push_back(dressed.characters[s][static_cast<std::size_t>(b)]
                                            [static_cast<std::size_t>(bright)]);
        }
        energies.add_series("branch " + std::to_string(b), dressed.times, e);
        characters.add_series("branch " + std::to_string(b), dressed.times, c);
    }
    const std::string e_path = out_dir + "/" + scenario.name + "_dressed_energies.svg";
    const std::string c_path = out_dir + "/" + scenario.name + "_dressed_characters.svg";
    energies.write(e_path);
    characters.write(c_path);
    written.push_back(e_path);
    written.push_back(c_path);
}

} // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
    Scenario effective = scenario;
    if (options.dt_override) {
        effective.grid.dt = *options.dt_override;
        json j = json::parse(effective.resolved_json);
        j["grid"]["dt_ps"] = effective.grid.dt;
        effective.resolved_json = j.dump(2);
    }
    RunResult result;
    result.trajectory = propagate(effective.system, effective.pulse, effective.initial_state,
                                  effective.grid);
    const AnalysisOutcome outcome = run_analyses(effective, result.trajectory);
    result.verdicts_pass = outcome.verdicts_pass;

    json report;
    report["tool_version"] = kToolVersion;
    report["dt_ps"] = effective.grid.dt;
    report["scenario"] = json::parse(effective.resolved_json);
    report["analyses"] = outcome.report;
    report["final_populations"] = result.trajectory.final_populations();
    report["verdicts_pass"] = outcome.verdicts_pass;
    result.analysis_json = report.dump(2);

    if (options.write_files) {
        std::filesystem::create_directories(options.out_dir);
        if (effective.outputs.trajectory_csv)
            write_text(options.out_dir + "/" + effective.name + "_trajectory.csv",
                       trajectory_csv(effective, result.trajectory), result.written_files);
        if (effective.outputs.analysis_json)
            write_text(options.out_dir + "/" + effective.name + "_analysis.json",
                       result.analysis_json + "\n", result.written_files);
        if (effective.outputs.plots && options.plots)
            write_plots(effective, result.trajectory, options.out_dir, result.written_files);
    }
    return result;
}

SweepResult sweep_scenario(const Scenario& scenario, const std::string& param_path,
                           const std::vector<double>& values, bool parallel) {
    // resolve the dotted path once up front so a bad path fails loudly
    {
        json probe = json::parse(scenario.resolved_json);
        json* node = &probe;
        std::stringstream ss(param_path);
        std::string token;
        while (std::getline(ss, token, '.')) {
            if (node->is_array()) {
                const std::size_t idx = static_cast<std::size_t>(std::stoul(token));
                if (idx >= node->size()) throw ConfigError("sweep: bad index in " + param_path);
                node = &(*node)[idx];
            } else if (node->is_object() && node->contains(token)) {
                node = &node->at(token);
            } else {
                throw ConfigError("sweep: no such parameter: " + param_path);
            }
        }
        if (!node->is_number()) throw ConfigError("sweep: " + param_path + " is not numeric");
    }

    SweepResult result;
    result.rows.resize(values.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < static_cast<long>(values.size()); ++i) {
        SweepRow row;
        row.value = values[static_cast<std::size_t>(i)];
        try {
            json j = json::parse(scenario.resolved_json);
            json* node = &j;
            std::stringstream ss(param_path);
            std::string token;
            while (std::getline(ss, token, '.')) {
                if (node->is_array())
                    node = &(*node)[static_cast<std::size_t>(std::stoul(token))];
                else
                    node = &node->at(token);
            }
            *node = row.value;
            Scenario patched = parse_scenario_string(j.dump());
            RunOptions options;
            options.write_files = false;
            const RunResult run = run_scenario(patched, options);
            row.ok = true;
            row.final_populations = run.trajectory.final_populations();
            const json report = json::parse(run.analysis_json);
            for (const auto& a : report.at("analyses")) {
                const std::string type = a.at("type").get<std::string>();
                if (type == "locking" && !row.locked) row.locked = a.at("locked").get<bool>();
                if (type == "adiabaticity" && !row.adiabaticity_peak)
                    row.adiabaticity_peak = a.at("peak").get<double>();
                if (type == "classify" && !row.classified && !a.at("label").is_null())
                    row.classified = a.at("label").get<int>();
            }
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        result.rows[static_cast<std::size_t>(i)] = std::move(row);
    }

    std::ostringstream csv;
    csv << "value,status,final_populations,locked,adiabaticity_peak,classified\n";
    for (const auto& row : result.rows) {
        csv << format_double(row.value) << "," << (row.ok ? "ok" : "error") << ",";
        for (std::size_t i = 0; i < row.final_populations.size(); ++i)
            csv << (i ? ";" : "") << format_double(row.final_populations[i]);
        csv << ",";
        if (row.locked) csv << (*row.locked ? "true" : "false");
        csv << ",";
        if (row.adiabaticity_peak) csv << format_double(*row.adiabaticity_peak);
        csv << ",";
        if (row.classified) csv << *row.classified;
        csv << "\n";
    }
    result.csv = csv.str();
    return result;
}

namespace {

PulseLibraryEntry parse_library_entry(const json& pulse_json, const std::string& label,
                                      const SystemSpec& sys, const TimeGrid& grid,
                                      const std::string& path) {
    PulseLibraryEntry entry;
    entry.label = label;
    entry.pulse = parse_pulse(pulse_json, path);
    entry.system = sys;
    entry.grid = grid;
    return entry;
}

} // namespace

PulseLibrary parse_pulse_library_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("library JSON parse error: ") + e.what());
    }
    check_keys(j, {"table1", "table2"}, "");
    PulseLibrary lib;
    for (const char* table : {"table1", "table2"}) {
        if (!j.contains(table)) fail(table, "missing required key");
        const json& t = j.at(table);
        const bool two_level = std::string(table) == "table1";
        check_keys(t,
                   two_level
                       ? std::vector<std::string>{"system", "grid", "invert", "dark"}
                       : std::vector<std::string>{"system", "grid", "invert_to_1", "invert_to_2",
                                                  "dark"},
                   table);
        if (!t.contains("system")) fail(join_path(table, "system"), "missing required key");
        const SystemSpec sys = parse_system(t.at("system"), join_path(table, "system"));
        if (!t.contains("grid")) fail(join_path(table, "grid"), "missing required key");
        // the grid's default dt must cover every pulse; require explicit dt here
        if (!t.at("grid").contains("dt_ps"))
            fail(join_path(table, "grid.dt_ps"), "gate library grids need an explicit dt");
        TimeGrid grid;
        grid.t_start = get_number(t.at("grid"), "t_start_ps", join_path(table, "grid"));
        grid.t_end = get_number(t.at("grid"), "t_end_ps", join_path(table, "grid"));
        grid.dt = get_number(t.at("grid"), "dt_ps", join_path(table, "grid"));
        grid.validate();

        auto parse_darks = [&](std::vector<PulseLibraryEntry>& out) {
            if (!t.contains("dark")) fail(join_path(table, "dark"), "missing required key");
            if (!t.at("dark").is_array() || t.at("dark").empty())
                fail(join_path(table, "dark"), "expected a nonempty array of dark pulses");
            std::size_t idx = 0;
            for (const auto& d : t.at("dark"))
                out.push_back(parse_library_entry(
                    d, "dark", sys, grid,
                    join_path(table, "dark[" + std::to_string(idx++) + "]")));
        };
        if (two_level) {
            if (!t.contains("invert")) fail(join_path(table, "invert"), "missing required key");
            lib.invert = parse_library_entry(t.at("invert"), "invert", sys, grid,
                                             join_path(table, "invert"));
            parse_darks(lib.dark_two_level);
        } else {
            if (!t.contains("invert_to_1"))
                fail(join_path(table, "invert_to_1"), "missing required key");
            if (!t.contains("invert_to_2"))
                fail(join_path(table, "invert_to_2"), "missing required key");
            lib.invert_to_1 = parse_library_entry(t.at("invert_to_1"), "invert_to_1", sys, grid,
                                                  join_path(table, "invert_to_1"));
            lib.invert_to_2 = parse_library_entry(t.at("invert_to_2"), "invert_to_2", sys, grid,
                                                  join_path(table, "invert_to_2"));
            parse_darks(lib.dark_three_level);
        }
    }
    lib.validate();
    return lib;
}

PulseLibrary parse_pulse_library(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot read library file: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_pulse_library_string(buffer.str());
}

std::string gate_report_to_json(const GateReport& report) {
    json out;
    out["tool_version"] = kToolVersion;
    out["overall_pass"] = report.overall_pass;
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"table", row.table},
                        {"control", row.control},
                        {"input", row.input},
                        {"expected", row.expected},
                        {"simulated", row.simulated},
                        {"pass", row.pass},
                        {"final_populations", row.final_populations}});
    }
    out["rows"] = rows;
    return out.dump(2);
}

std::string gate_report_to_table(const GateReport& report) {
    std::ostringstream out;
    out << "table control input expected simulated result\n";
    for (const auto& row : report.rows) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-5s %-7s %-5s %-8s %-9s %s\n", row.table.c_str(),
                      row.control.c_str(), row.input.c_str(), row.expected.c_str(),
                      row.simulated.c_str(), row.pass ? "pass" : "FAIL");
        out << line;
    }
    out << (report.overall_pass ? "overall: pass" : "overall: FAIL") << "\n";
    return out.str();
}

} // namespace chirpsim
