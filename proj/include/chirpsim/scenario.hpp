#ifndef CHIRPSIM_SCENARIO_HPP
#define CHIRPSIM_SCENARIO_HPP

#include "chirpsim/analysis.hpp"
#include "chirpsim/gates.hpp"
#include "chirpsim/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chirpsim {

inline constexpr const char* kToolVersion = "0.1.0";

/// One requested analysis with its parameters and (optional) pass criterion.
struct AnalysisRequest {
    std::string type; ///< dressed_states, adiabaticity, locking, beat_spectrum,
                      ///< superposition, classify
    int level = 1;                        ///< locking / beat_spectrum
    double window_start = 0.0;            ///< locking / beat_spectrum
    double window_end = 0.0;
    std::vector<int> members;             ///< superposition
    double at_time = 0.0;                 ///< superposition sample time
    double threshold = 0.9;               ///< classify
    // optional verdicts; run exit status reflects them
    std::optional<bool> expect_locked;
    std::optional<int> expect_label;
    std::optional<double> max_deviation;      ///< superposition
    std::optional<double> max_peak;           ///< adiabaticity
    std::vector<double> expect_peaks_ghz;     ///< beat_spectrum, one-bin tolerance
};

struct OutputRequest {
    bool trajectory_csv = true;
    bool analysis_json = true;
    bool plots = true;
};

/// Fully resolved scenario: what to simulate and what to report. The resolved
/// JSON (defaults materialized, units converted on parse) travels with it for
/// provenance and sweep patching.
struct Scenario {
    std::string name;
    SystemSpec system;
    PulseSpec pulse;
    TimeGrid grid;          ///< dt filled from recommended_dt when absent
    DensityMatrix initial_state;
    std::vector<AnalysisRequest> analyses;
    OutputRequest outputs;
    std::string resolved_json; ///< serialized resolved scenario (defaults materialized)
};

/// Parses a scenario JSON file. Unknown keys, missing required keys and
/// out-of-range values raise ConfigError naming the key path. GHz fields are
/// converted to rad/ps on load.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_string(const std::string& text);

/// Round-trip serialization of the resolved scenario.
std::string serialize_scenario(const Scenario& scenario);

struct RunOptions {
    std::string out_dir = ".";
    std::optional<double> dt_override;
    bool plots = true;
    bool write_files = true;
};

struct RunResult {
    Trajectory trajectory;
    std::string analysis_json; ///< serialized analysis report
    bool verdicts_pass = true; ///< every requested verdict held
    std::vector<std::string> written_files;
};

/// Propagates, runs the requested analyses, writes CSV / JSON / SVG artifacts.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::vector<double> final_populations;
    std::optional<bool> locked;
    std::optional<double> adiabaticity_peak;
    std::optional<int> classified;
};

struct SweepResult {
    std::vector<SweepRow> rows; ///< deterministic, one per value in input order
    std::string csv;
};

/// Re-runs the scenario once per value with the numeric field at param_path
/// (dot-separated into the scenario JSON) replaced. Runs execute
/// concurrently; a failing run is recorded in its row and the sweep continues.
SweepResult sweep_scenario(const Scenario& scenario, const std::string& param_path,
                           const std::vector<double>& values, bool parallel = true);

/// Loads the gate pulse library configuration.
PulseLibrary parse_pulse_library(const std::string& path);
PulseLibrary parse_pulse_library_string(const std::string& text);

/// Gate report serializations used by the CLI.
std::string gate_report_to_json(const GateReport& report);
std::string gate_report_to_table(const GateReport& report);

} // namespace chirpsim

#endif
