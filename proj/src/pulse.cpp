#include "chirpsim/pulse.hpp"

#include "chirpsim/errors.hpp"

#include <cmath>

namespace chirpsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;
} // namespace

double ghz_to_rad_per_ps(double ghz) { return ghz * 2.0 * kPi * 1e-3; }
double rad_per_ps_to_ghz(double rad_per_ps) { return rad_per_ps / (2.0 * kPi * 1e-3); }

ChirpCoefficients::ChirpCoefficients(const std::vector<double>& coeffs) {
    if (coeffs.size() > max_order)
        throw ConfigError("chirp: at most b0..b5 supported, got " +
                          std::to_string(coeffs.size()) + " coefficients");
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!std::isfinite(coeffs[i]))
            throw ConfigError("chirp: coefficient b" + std::to_string(i) + " not finite");
        b[i] = coeffs[i];
    }
}

double phase_at(const ChirpCoefficients& chirp, double t) {
    double acc = 0.0;
    for (std::size_t n = ChirpCoefficients::max_order; n-- > 0;)
        acc = acc * t + chirp.b[n];
    return acc;
}

double sweep_at(const ChirpCoefficients& chirp, double t) {
    double acc = 0.0;
    for (std::size_t n = ChirpCoefficients::max_order; n-- > 1;)
        acc = acc * t + static_cast<double>(n) * chirp.b[n];
    return acc;
}

EnvelopeKind envelope_kind_from_string(const std::string& name) {
    if (name == "gaussian") return EnvelopeKind::gaussian;
    if (name == "sech") return EnvelopeKind::sech;
    if (name == "cos_squared") return EnvelopeKind::cos_squared;
    throw ConfigError("unknown envelope kind: " + name);
}

std::string to_string(EnvelopeKind kind) {
    switch (kind) {
    case EnvelopeKind::gaussian: return "gaussian";
    case EnvelopeKind::sech: return "sech";
    case EnvelopeKind::cos_squared: return "cos_squared";
    }
    throw ConfigError("unknown envelope kind enum value");
}

void PulseSpec::validate() const {
    if (!(fwhm > 0.0)) throw ConfigError("pulse: fwhm must be > 0");
    if (!(peak_rabi >= 0.0)) throw ConfigError("pulse: peak_rabi must be >= 0");
    if (photon_order < 1) throw ConfigError("pulse: photon_order must be >= 1");
    if (!std::isfinite(fwhm) || !std::isfinite(peak_rabi) || !std::isfinite(center_time))
        throw ConfigError("pulse: non-finite field");
}

double envelope_at(const PulseSpec& spec, double t) {
    const double tau = t - spec.center_time;
    switch (spec.envelope_kind) {
    case EnvelopeKind::gaussian:
        // intensity exp(-4 ln2 tau^2 / fwhm^2) -> amplitude gets half that exponent
        return std::exp(-2.0 * kLn2 * tau * tau / (spec.fwhm * spec.fwhm));
    case EnvelopeKind::sech: {
        // amplitude sech(tau/T); intensity sech^2 halves at tau = T*arccosh(sqrt 2)
        const double T = spec.fwhm / (2.0 * std::acosh(std::sqrt(2.0)));
        return 1.0 / std::cosh(tau / T);
    }
    case EnvelopeKind::cos_squared: {
        // amplitude cos^2(pi tau / (2T)) on |tau| <= T; intensity cos^4 halves
        // where cos x = 2^(-1/4), fixing T against the intensity FWHM
        const double x_half = std::acos(std::pow(2.0, -0.25));
        const double T = kPi * spec.fwhm / (4.0 * x_half);
        if (std::abs(tau) >= T) return 0.0;
        const double c = std::cos(kPi * tau / (2.0 * T));
        return c * c;
    }
    }
    throw ConfigError("unknown envelope kind enum value");
}

double rabi_at(const PulseSpec& spec, double t) {
    return spec.peak_rabi * std::pow(envelope_at(spec, t), spec.photon_order);
}

double pulse_area(const PulseSpec& spec, double t_start, double t_end, double dt) {
    // composite Simpson on an even number of intervals
    auto steps = static_cast<long>(std::ceil((t_end - t_start) / dt));
    if (steps < 2) steps = 2;
    if (steps % 2 != 0) ++steps;
    const double h = (t_end - t_start) / static_cast<double>(steps);
    double acc = rabi_at(spec, t_start) + rabi_at(spec, t_end);
    for (long k = 1; k < steps; ++k)
        acc += (k % 2 == 1 ? 4.0 : 2.0) * rabi_at(spec, t_start + h * static_cast<double>(k));
    return acc * h / 3.0;
}

double gaussian_peak_for_area(double area, double fwhm) {
    return area / (fwhm * std::sqrt(kPi / (2.0 * kLn2)));
}

} // namespace chirpsim
