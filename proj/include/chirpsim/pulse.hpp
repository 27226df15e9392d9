#ifndef CHIRPSIM_PULSE_HPP
#define CHIRPSIM_PULSE_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace chirpsim {

/// Unit conversion used throughout: spectroscopic (cyclic) GHz to angular
/// rad/ps. 1 GHz = 2*pi*1e-3 rad/ps.
double ghz_to_rad_per_ps(double ghz);
double rad_per_ps_to_ghz(double rad_per_ps);

/// Taylor coefficients of the temporal phase phi(t) = sum_n b_n t^n,
/// t measured from the pulse peak. b_n has units rad/ps^n. At most b0..b5.
struct ChirpCoefficients {
    static constexpr std::size_t max_order = 6;
    std::array<double, max_order> b{};

    ChirpCoefficients() = default;
    explicit ChirpCoefficients(const std::vector<double>& coeffs);
};

/// phi(t) evaluated by Horner's scheme. [rad]
double phase_at(const ChirpCoefficients& chirp, double t);

/// dphi/dt = sum_n n b_n t^(n-1), the instantaneous frequency sweep. [rad/ps]
double sweep_at(const ChirpCoefficients& chirp, double t);

enum class EnvelopeKind { gaussian, sech, cos_squared };

EnvelopeKind envelope_kind_from_string(const std::string& name);
std::string to_string(EnvelopeKind kind);

/// Phase-modulated driving pulse. fwhm is the *intensity* FWHM; peak_rabi is
/// the peak of |Omega| after N-photon exponentiation (the proportionality
/// constant and effective dipole moment are absorbed into it).
struct PulseSpec {
    EnvelopeKind envelope_kind = EnvelopeKind::gaussian;
    double fwhm = 1.0;        ///< ps, intensity FWHM
    double peak_rabi = 0.0;   ///< rad/ps
    ChirpCoefficients chirp;
    int photon_order = 1;     ///< N >= 1
    double center_time = 0.0; ///< ps

    void validate() const;
};

/// Field-amplitude envelope in [0, 1]; the squared value has FWHM spec.fwhm
/// and the maximum 1 sits at spec.center_time. cos_squared is identically
/// zero outside its compact support.
double envelope_at(const PulseSpec& spec, double t);

/// Instantaneous Rabi rate peak_rabi * envelope^N. Kept real and nonnegative;
/// the chirp phase enters the dynamics only through N*phidot on the
/// Hamiltonian diagonal. [rad/ps]
double rabi_at(const PulseSpec& spec, double t);

/// Pulse area (integral of rabi_at) by composite Simpson quadrature.
double pulse_area(const PulseSpec& spec, double t_start, double t_end, double dt);

/// Peak Rabi rate that gives a requested pulse area for a Gaussian envelope
/// with photon_order 1 (closed form).
double gaussian_peak_for_area(double area, double fwhm);

} // namespace chirpsim

#endif
