#ifndef CHIRPSIM_ANALYSIS_HPP
#define CHIRPSIM_ANALYSIS_HPP

#include "chirpsim/propagator.hpp"

#include <optional>
#include <set>
#include <vector>

namespace chirpsim {

/// Instantaneous eigenstates of H(t) tracked through time. Branch identity is
/// established by maximal eigenvector overlap with the previous step, so a
/// branch keeps its label across avoided crossings.
struct DressedTrajectory {
    std::vector<double> times;                            ///< ps
    std::vector<std::vector<double>> energies;            ///< [sample][branch], rad/ps
    std::vector<std::vector<std::vector<double>>> characters; ///< [sample][branch][bare] |overlap|^2
};

DressedTrajectory dressed_states(const Trajectory& traj);

struct AdiabaticityReport {
    std::vector<double> times;   ///< ps (interior samples)
    std::vector<double> metric;  ///< max over branch pairs of |<m|dH/dt|n>| / gap^2
    double peak = 0.0;
    double peak_time = 0.0;
    bool near_crossing = false;  ///< a gap below 1e-9 rad/ps was capped
};

/// Textbook adiabaticity criterion evaluated on the stored samples; dH/dt by
/// centered difference of reconstructed Hamiltonians.
AdiabaticityReport adiabaticity(const DressedTrajectory& dressed, const Trajectory& traj);

struct LockingReport {
    double mean = 0.0;
    double peak_to_peak = 0.0;
    bool locked = false; ///< peak_to_peak <= 0.1 and mean >= 0.4
};

/// Population statistics of one level over a time window.
LockingReport detect_locking(const Trajectory& traj, int level, double window_start,
                             double window_end);

struct BeatSpectrum {
    std::vector<double> frequencies_ghz;
    std::vector<double> amplitudes;
    struct Peak {
        double frequency_ghz;
        double amplitude;
    };
    std::vector<Peak> peaks;        ///< local maxima above 5x median amplitude
    double bin_ghz = 0.0;           ///< frequency resolution, 1/window
    bool window_overlaps_pulse = false;
};

/// Hann-windowed discrete Fourier transform of the mean-subtracted population
/// of one level over [window_start, window_end].
BeatSpectrum beat_spectrum(const Trajectory& traj, int level, double window_start,
                           double window_end);

struct SuperpositionReport {
    double max_population_deviation = 0.0; ///< from 1/|members|
    double min_pairwise_coherence = 0.0;   ///< min |rho_ij| over member pairs
};

/// How far rho is from an equal coherent superposition of the member levels.
SuperpositionReport superposition_quality(const DensityMatrix& rho, const std::set<int>& members);

/// Index of the unique level with population >= threshold, or nullopt
/// ("unclassified"). threshold must lie in (0.5, 1].
std::optional<int> classify_logical(const DensityMatrix& rho, double threshold);

} // namespace chirpsim

#endif
