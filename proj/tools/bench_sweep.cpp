// Timing comparison of the serial and concurrent sweep paths on a synthetic
// chirp scan. Run without arguments; pass a value count to change the load.
#include "chirpsim/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

const char* kScenario = R"({
  "name": "bench",
  "system": {"n_levels": 2, "detunings_rad_per_ps": [0.0], "bright": [1]},
  "pulse": {
    "envelope": "gaussian",
    "fwhm_ps": 2.0,
    "peak_rabi_rad_per_ps": 8.0,
    "chirp": {"b2_rad_per_ps2": 2.0}
  },
  "grid": {"t_start_ps": -6.0, "t_end_ps": 6.0, "dt_ps": 0.001},
  "outputs": {"trajectory_csv": false, "analysis_json": false, "plots": false}
})";

double time_sweep(const chirpsim::Scenario& scenario, const std::vector<double>& values,
                  bool parallel) {
    const auto start = std::chrono::steady_clock::now();
    const chirpsim::SweepResult result =
        chirpsim::sweep_scenario(scenario, "pulse.chirp.b2_rad_per_ps2", values, parallel);
    const auto stop = std::chrono::steady_clock::now();
    for (const auto& row : result.rows)
        if (!row.ok) {
            std::fprintf(stderr, "bench row failed: %s\n", row.error.c_str());
            std::exit(1);
        }
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    const int n_values = argc > 1 ? std::atoi(argv[1]) : 16;
    if (n_values <= 0) {
        std::fprintf(stderr, "usage: %s [n_values]\n", argv[0]);
        return 1;
    }
    const chirpsim::Scenario scenario = chirpsim::parse_scenario_string(kScenario);
    std::vector<double> values;
    for (int i = 0; i < n_values; ++i)
        values.push_back(-2.0 + 4.0 * i / std::max(1, n_values - 1));

    // warm-up run keeps first-touch costs out of both timings
    time_sweep(scenario, {values.front()}, false);

    const double serial = time_sweep(scenario, values, false);
    const double parallel = time_sweep(scenario, values, true);
    std::printf("sweep of %d values\n", n_values);
    std::printf("serial:   %8.3f s\n", serial);
    std::printf("parallel: %8.3f s\n", parallel);
    std::printf("speedup:  %8.2fx\n", serial / parallel);
    return 0;
}
