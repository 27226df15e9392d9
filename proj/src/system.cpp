#include "chirpsim/system.hpp"

#include "chirpsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chirpsim {

void SystemSpec::validate() const {
    if (n_levels < 2) throw ConfigError("system: n_levels must be >= 2");
    if (static_cast<int>(detunings.size()) != n_levels - 1)
        throw ConfigError("system: expected " + std::to_string(n_levels - 1) +
                          " detunings, got " + std::to_string(detunings.size()));
    for (double d : detunings)
        if (!std::isfinite(d)) throw ConfigError("system: non-finite detuning");
    for (const auto& [key, v] : couplings) {
        const auto [i, j] = key;
        if (i < 1 || j < 1 || i >= n_levels || j >= n_levels)
            throw ConfigError("system: coupling index out of range (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
        if (i == j) throw ConfigError("system: self-coupling at level " + std::to_string(i));
        if (i > j) throw ConfigError("system: store couplings with i < j");
        if (!std::isfinite(v)) throw ConfigError("system: non-finite coupling");
    }
    if (bright.empty()) throw ConfigError("system: at least one bright level required");
    if (bright_weights.size() != bright.size())
        throw ConfigError("system: bright_weights size must match bright size");
    for (int b : bright)
        if (b < 1 || b >= n_levels)
            throw ConfigError("system: bright level " + std::to_string(b) + " out of range");
    for (double w : bright_weights)
        if (!std::isfinite(w)) throw ConfigError("system: non-finite bright weight");
}

bool SystemSpec::is_bright(int level) const {
    return std::find(bright.begin(), bright.end(), level) != bright.end();
}

HamiltonianMatrix build_hamiltonian(const SystemSpec& sys, const PulseSpec& pulse, double t) {
    sys.validate();
    pulse.validate();
    return detail::build_hamiltonian_unchecked(sys, pulse, t);
}

HamiltonianMatrix detail::build_hamiltonian_unchecked(const SystemSpec& sys,
                                                      const PulseSpec& pulse, double t) {
    const int n = sys.n_levels;
    HamiltonianMatrix H = HamiltonianMatrix::Zero(n, n);
    const double sweep = sweep_at(pulse.chirp, t - pulse.center_time);
    const double N = static_cast<double>(pulse.photon_order);
    for (int i = 1; i < n; ++i)
        H(i, i) = sys.detunings[static_cast<std::size_t>(i - 1)] + N * sweep;
    // the printed two-level matrix carries Omega/2; the multilevel matrices carry bare Omega
    const double scale = (n == 2) ? 0.5 : 1.0;
    const double omega = rabi_at(pulse, t);
    for (std::size_t k = 0; k < sys.bright.size(); ++k) {
        const int i = sys.bright[k];
        H(0, i) = sys.bright_weights[k] * omega * scale;
        H(i, 0) = std::conj(H(0, i));
    }
    for (const auto& [key, v] : sys.couplings) {
        H(key.first, key.second) = v;
        H(key.second, key.first) = v;
    }
    return H;
}

SystemSpec anthracene_preset() {
    SystemSpec sys;
    sys.n_levels = 5;
    sys.detunings = {ghz_to_rad_per_ps(3.23), ghz_to_rad_per_ps(1.7),
                     ghz_to_rad_per_ps(7.57), ghz_to_rad_per_ps(3.7)};
    sys.couplings = {
        {{1, 2}, ghz_to_rad_per_ps(-0.28)}, {{1, 3}, ghz_to_rad_per_ps(-4.24)},
        {{1, 4}, ghz_to_rad_per_ps(-1.86)}, {{2, 3}, ghz_to_rad_per_ps(0.29)},
        {{2, 4}, ghz_to_rad_per_ps(1.82)},  {{3, 4}, ghz_to_rad_per_ps(0.94)},
    };
    sys.bright = {1};
    sys.bright_weights = {1.0};
    sys.validate();
    return sys;
}

const std::vector<std::pair<int, int>>& tier_coupling_pattern() {
    static const std::vector<std::pair<int, int>> pattern = {
        {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5},
        {2, 6}, {2, 7}, {3, 6}, {3, 7}, {3, 8}, {3, 9},
    };
    return pattern;
}

SystemSpec tier_preset(const std::vector<double>& detunings,
                       const std::map<std::pair<int, int>, double>& couplings,
                       const std::vector<double>& bright_weights) {
    const auto& pattern = tier_coupling_pattern();
    for (const auto& [key, v] : couplings) {
        (void)v;
        if (std::find(pattern.begin(), pattern.end(), key) == pattern.end())
            throw ConfigError("tier: coupling (" + std::to_string(key.first) + "," +
                              std::to_string(key.second) + ") is a structural zero of the tier model");
    }
    SystemSpec sys;
    sys.n_levels = 10;
    sys.detunings = detunings;
    sys.couplings = couplings;
    sys.bright = {1, 2, 3};
    sys.bright_weights = bright_weights;
    sys.validate();
    return sys;
}

} // namespace chirpsim
