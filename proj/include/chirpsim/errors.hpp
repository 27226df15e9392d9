#ifndef CHIRPSIM_ERRORS_HPP
#define CHIRPSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chirpsim {

/// Invalid specification, scenario file, or library configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Integrator health check failed (trace drift or negativity); carries the
/// offending time so the caller can see where the step size gave out.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t_ps)
        : std::runtime_error(what + " at t = " + std::to_string(t_ps) + " ps"),
          time_ps(t_ps) {}
    double time_ps;
};

} // namespace chirpsim

#endif
