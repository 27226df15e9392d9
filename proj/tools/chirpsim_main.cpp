#include "chirpsim/errors.hpp"
#include "chirpsim/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIntegrationFailure = 3;

std::vector<double> parse_csv_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t consumed = 0;
            const double v = std::stod(token, &consumed);
            if (consumed != token.size()) throw std::invalid_argument(token);
            values.push_back(v);
        } catch (const std::exception&) {
            throw chirpsim::ConfigError("--values: not a number: " + token);
        }
    }
    return values; // empty list is a valid (empty) sweep
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 double dt_override, bool no_plots) {
    const chirpsim::Scenario scenario = chirpsim::parse_scenario(scenario_path);
    chirpsim::RunOptions options;
    options.out_dir = out_dir;
    options.plots = !no_plots;
    if (dt_override > 0) options.dt_override = dt_override;
    const chirpsim::RunResult result = chirpsim::run_scenario(scenario, options);
    for (const auto& f : result.written_files) std::cout << "wrote " << f << "\n";
    const auto& pops = result.trajectory.final_populations();
    std::cout << "final populations:";
    for (double p : pops) std::printf(" %.6f", p);
    std::cout << "\n";
    if (!result.verdicts_pass) {
        std::cerr << "verdict failure: one or more analysis expectations did not hold\n";
        return kExitVerdictFailure;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& param,
              const std::string& values_csv, const std::string& out_dir, bool serial) {
    const chirpsim::Scenario scenario = chirpsim::parse_scenario(scenario_path);
    const std::vector<double> values = parse_csv_values(values_csv);
    const chirpsim::SweepResult result =
        chirpsim::sweep_scenario(scenario, param, values, !serial);
    const std::string path = out_dir + "/" + scenario.name + "_sweep.csv";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw chirpsim::ConfigError("cannot open " + path + " for writing");
    file << result.csv;
    std::cout << "wrote " << path << "\n";
    std::cout << result.csv;
    for (const auto& row : result.rows)
        if (!row.ok) {
            std::cerr << "sweep value " << row.value << " failed: " << row.error << "\n";
            return kExitIntegrationFailure;
        }
    return kExitOk;
}

int cmd_gates(const std::string& library_path, const std::string& out_dir) {
    const chirpsim::PulseLibrary library = chirpsim::parse_pulse_library(library_path);
    const chirpsim::GateReport report = chirpsim::verify_tables(library);
    std::cout << chirpsim::gate_report_to_table(report);
    const std::string path = out_dir + "/gate_report.json";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw chirpsim::ConfigError("cannot open " + path + " for writing");
    file << chirpsim::gate_report_to_json(report) << "\n";
    std::cout << "wrote " << path << "\n";
    return report.overall_pass ? kExitOk : kExitVerdictFailure;
}

int cmd_validate(const std::string& scenario_path) {
    const chirpsim::Scenario scenario = chirpsim::parse_scenario(scenario_path);
    std::cout << chirpsim::serialize_scenario(scenario) << "\n";
    std::cout << "ok: " << scenario.name << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density-matrix simulator for chirped-pulse adiabatic passage"};
    app.require_subcommand(1);

    std::string scenario_path, library_path, out_dir = ".", param, values_csv;
    double dt_override = 0.0;
    bool no_plots = false, serial = false;

    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its artifacts");
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--dt", dt_override, "override the integration step (ps)");
    simulate->add_flag("--no-plots", no_plots, "skip SVG output");

    auto* sweep = app.add_subcommand("sweep", "Re-run a scenario over a list of parameter values");
    sweep->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sweep->add_option("--param", param, "dotted path into the scenario, e.g. pulse.chirp.b2_rad_per_ps2")
        ->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_flag("--serial", serial, "disable concurrent sweep execution");

    auto* gates = app.add_subcommand("gates", "Verify the gate truth tables from a pulse library");
    gates->add_option("library", library_path, "pulse library JSON file")->required();
    gates->add_option("--out", out_dir, "output directory");

    auto* validate = app.add_subcommand("validate", "Parse a scenario and print its resolved form");
    validate->add_option("scenario", scenario_path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(scenario_path, out_dir, dt_override, no_plots);
        if (sweep->parsed()) return cmd_sweep(scenario_path, param, values_csv, out_dir, serial);
        if (gates->parsed()) return cmd_gates(library_path, out_dir);
        if (validate->parsed()) return cmd_validate(scenario_path);
    } catch (const chirpsim::IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        const std::string diag = out_dir + "/integration_error.txt";
        std::ofstream file(diag, std::ios::binary);
        if (file) {
            file << e.what() << "\n";
            std::cerr << "diagnostic written to " << diag << "\n";
        }
        return kExitIntegrationFailure;
    } catch (const chirpsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
