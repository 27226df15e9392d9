#include "chirpsim/analysis.hpp"

#include "chirpsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace chirpsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Greedy assignment of current eigenvectors to previous branches on the
/// |overlap| matrix. For densely sampled trajectories the matrix is near a
/// permutation of the identity and greedy matching is exact; exact ties fall
/// back to lowest-index-first via the scan order.
std::vector<int> match_branches(const Eigen::MatrixXcd& prev, const Eigen::MatrixXcd& now) {
    const int n = static_cast<int>(prev.cols());
    Eigen::MatrixXd overlap(n, n);
    for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e)
            overlap(b, e) = std::abs(prev.col(b).dot(now.col(e)));

    std::vector<int> branch_to_eig(static_cast<std::size_t>(n), -1);
    std::vector<bool> branch_done(static_cast<std::size_t>(n), false);
    std::vector<bool> eig_done(static_cast<std::size_t>(n), false);
    for (int pick = 0; pick < n; ++pick) {
        double best = -1.0;
        int best_b = 0, best_e = 0;
        for (int b = 0; b < n; ++b) {
            if (branch_done[static_cast<std::size_t>(b)]) continue;
            for (int e = 0; e < n; ++e) {
                if (eig_done[static_cast<std::size_t>(e)]) continue;
                if (overlap(b, e) > best) {
                    best = overlap(b, e);
                    best_b = b;
                    best_e = e;
                }
            }
        }
        branch_to_eig[static_cast<std::size_t>(best_b)] = best_e;
        branch_done[static_cast<std::size_t>(best_b)] = true;
        eig_done[static_cast<std::size_t>(best_e)] = true;
    }
    return branch_to_eig;
}

} // namespace

DressedTrajectory dressed_states(const Trajectory& traj) {
    if (traj.n_samples() == 0) throw ConfigError("dressed_states: empty trajectory");
    const int n = traj.system.n_levels;
    DressedTrajectory out;
    out.times = traj.times;
    out.energies.reserve(traj.n_samples());
    out.characters.reserve(traj.n_samples());

    Eigen::MatrixXcd prev_vectors;
    for (std::size_t s = 0; s < traj.n_samples(); ++s) {
        const HamiltonianMatrix H =
            detail::build_hamiltonian_unchecked(traj.system, traj.pulse, traj.times[s]);
        Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(H);

        // map branch label -> eigenvector index at this sample
        std::vector<int> assign(static_cast<std::size_t>(n));
        if (s == 0) {
            std::iota(assign.begin(), assign.end(), 0); // ascending order defines labels
        } else {
            assign = match_branches(prev_vectors, es.eigenvectors());
        }

        std::vector<double> energies(static_cast<std::size_t>(n));
        std::vector<std::vector<double>> chars(static_cast<std::size_t>(n),
                                               std::vector<double>(static_cast<std::size_t>(n)));
        Eigen::MatrixXcd ordered(n, n);
        for (int b = 0; b < n; ++b) {
            const int e = assign[static_cast<std::size_t>(b)];
            energies[static_cast<std::size_t>(b)] = es.eigenvalues()(e);
            ordered.col(b) = es.eigenvectors().col(e);
            for (int bare = 0; bare < n; ++bare)
                chars[static_cast<std::size_t>(b)][static_cast<std::size_t>(bare)] =
                    std::norm(es.eigenvectors()(bare, e));
        }
        prev_vectors = ordered;
        out.energies.push_back(std::move(energies));
        out.characters.push_back(std::move(chars));
    }
    return out;
}

AdiabaticityReport adiabaticity(const DressedTrajectory& dressed, const Trajectory& traj) {
    if (traj.n_samples() < 3)
        throw ConfigError("adiabaticity: need at least 3 stored samples");
    const int n = traj.system.n_levels;
    AdiabaticityReport report;
    for (std::size_t s = 1; s + 1 < traj.n_samples(); ++s) {
        const double span = traj.times[s + 1] - traj.times[s - 1];
        const HamiltonianMatrix Hdot =
            (detail::build_hamiltonian_unchecked(traj.system, traj.pulse, traj.times[s + 1]) -
             detail::build_hamiltonian_unchecked(traj.system, traj.pulse, traj.times[s - 1])) /
            span;
        const HamiltonianMatrix H =
            detail::build_hamiltonian_unchecked(traj.system, traj.pulse, traj.times[s]);
        Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(H);
        const Eigen::MatrixXcd M = es.eigenvectors().adjoint() * Hdot * es.eigenvectors();
        double metric = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                double gap = std::abs(es.eigenvalues()(a) - es.eigenvalues()(b));
                if (gap < 1e-9) {
                    gap = 1e-9; // capped near-crossing
                    report.near_crossing = true;
                }
                metric = std::max(metric, std::abs(M(a, b)) / (gap * gap));
            }
        }
        report.times.push_back(traj.times[s]);
        report.metric.push_back(metric);
        if (metric > report.peak) {
            report.peak = metric;
            report.peak_time = traj.times[s];
        }
    }
    (void)dressed;
    return report;
}

LockingReport detect_locking(const Trajectory& traj, int level, double window_start,
                             double window_end) {
    if (level < 0 || level >= traj.system.n_levels)
        throw ConfigError("detect_locking: level out of range");
    if (window_start < traj.grid.t_start - 1e-12 || window_end > traj.grid.t_end + 1e-12 ||
        window_end <= window_start)
        throw ConfigError("detect_locking: window outside grid");
    double sum = 0.0;
    double lo = 1.0, hi = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < traj.n_samples(); ++s) {
        const double t = traj.times[s];
        if (t < window_start || t > window_end) continue;
        const double p = traj.populations[s][static_cast<std::size_t>(level)];
        sum += p;
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        ++count;
    }
    if (count == 0) throw ConfigError("detect_locking: no stored samples in window");
    LockingReport report;
    report.mean = sum / static_cast<double>(count);
    report.peak_to_peak = hi - lo;
    report.locked = report.peak_to_peak <= 0.1 && report.mean >= 0.4;
    return report;
}

BeatSpectrum beat_spectrum(const Trajectory& traj, int level, double window_start,
                           double window_end) {
    if (level < 0 || level >= traj.system.n_levels)
        throw ConfigError("beat_spectrum: level out of range");
    std::vector<double> ts, xs;
    for (std::size_t s = 0; s < traj.n_samples(); ++s) {
        const double t = traj.times[s];
        if (t < window_start || t > window_end) continue;
        ts.push_back(t);
        xs.push_back(traj.populations[s][static_cast<std::size_t>(level)]);
    }
    // drop a trailing sample recorded off-stride (grid end)
    while (ts.size() >= 3) {
        const double d0 = ts[1] - ts[0];
        const double dl = ts[ts.size() - 1] - ts[ts.size() - 2];
        if (std::abs(dl - d0) < 1e-9 * std::max(1.0, std::abs(d0))) break;
        ts.pop_back();
        xs.pop_back();
    }
    const std::size_t m = xs.size();
    if (m < 256) throw ConfigError("beat_spectrum: need at least 256 samples in window");

    BeatSpectrum spec;
    const double peak_omega = traj.pulse.peak_rabi;
    spec.window_overlaps_pulse =
        peak_omega > 0.0 && rabi_at(traj.pulse, window_start) > 1e-3 * peak_omega;

    const double dt_s = ts[1] - ts[0];
    const double window_len = dt_s * static_cast<double>(m);
    spec.bin_ghz = 1e3 / window_len; // cycles/ps -> GHz

    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
    std::vector<double> w(m);
    for (std::size_t k = 0; k < m; ++k)
        w[k] = (xs[k] - mean) *
               0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(m - 1)));

    const std::size_t n_freq = m / 2 + 1;
    spec.frequencies_ghz.resize(n_freq);
    spec.amplitudes.resize(n_freq);
    for (std::size_t j = 0; j < n_freq; ++j) {
        std::complex<double> acc(0.0, 0.0);
        const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k)
            acc += w[k] * std::polar(1.0, ang * static_cast<double>(k));
        spec.frequencies_ghz[j] = static_cast<double>(j) / window_len * 1e3;
        spec.amplitudes[j] = std::abs(acc);
    }

    std::vector<double> sorted = spec.amplitudes;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2),
                     sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t j = 1; j + 1 < n_freq; ++j) {
        if (spec.amplitudes[j] > spec.amplitudes[j - 1] &&
            spec.amplitudes[j] >= spec.amplitudes[j + 1] && spec.amplitudes[j] > 5.0 * median &&
            spec.amplitudes[j] > 1e-9) // floor keeps rounding ripple out of the peak list
            spec.peaks.push_back({spec.frequencies_ghz[j], spec.amplitudes[j]});
    }
    return spec;
}

SuperpositionReport superposition_quality(const DensityMatrix& rho, const std::set<int>& members) {
    if (members.empty()) throw ConfigError("superposition_quality: members must be nonempty");
    for (int i : members)
        if (i < 0 || i >= rho.rows())
            throw ConfigError("superposition_quality: member index out of range");
    SuperpositionReport report;
    const double target = 1.0 / static_cast<double>(members.size());
    for (int i : members)
        report.max_population_deviation =
            std::max(report.max_population_deviation, std::abs(rho(i, i).real() - target));
    bool first = true;
    for (int i : members) {
        for (int j : members) {
            if (j <= i) continue;
            const double c = std::abs(rho(i, j));
            report.min_pairwise_coherence = first ? c : std::min(report.min_pairwise_coherence, c);
            first = false;
        }
    }
    return report;
}

std::optional<int> classify_logical(const DensityMatrix& rho, double threshold) {
    if (!(threshold > 0.5) || !(threshold <= 1.0))
        throw ConfigError("classify_logical: threshold must lie in (0.5, 1]");
    for (int i = 0; i < rho.rows(); ++i)
        if (rho(i, i).real() >= threshold) return i;
    return std::nullopt;
}

} // namespace chirpsim
