#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chirpsim/errors.hpp"
#include "chirpsim/propagator.hpp"

#include <cmath>

using namespace chirpsim;

namespace {

SystemSpec two_level(double detuning = 0.0) {
    SystemSpec sys;
    sys.n_levels = 2;
    sys.detunings = {detuning};
    sys.bright = {1};
    sys.bright_weights = {1.0};
    return sys;
}

PulseSpec gaussian_area_pulse(double area, double fwhm = 2.0) {
    PulseSpec pulse;
    pulse.fwhm = fwhm;
    pulse.peak_rabi = gaussian_peak_for_area(area, fwhm);
    return pulse;
}

} // namespace

TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(validate_density_matrix(basis_state(3, 1)));

    DensityMatrix bad = basis_state(2, 0);
    bad(0, 1) = std::complex<double>(0.1, 0.0);
    CHECK_THROWS_AS(validate_density_matrix(bad), ConfigError); // not Hermitian

    DensityMatrix scaled = 1.5 * basis_state(2, 0);
    CHECK_THROWS_AS(validate_density_matrix(scaled), ConfigError); // trace != 1

    DensityMatrix indefinite = DensityMatrix::Zero(2, 2);
    indefinite(0, 0) = 1.5;
    indefinite(1, 1) = -0.5;
    CHECK_THROWS_AS(validate_density_matrix(indefinite), ConfigError);

    CHECK_THROWS_AS(basis_state(2, 2), ConfigError);
}

TEST_CASE("time grid validation") {
    TimeGrid grid{0.0, 1.0, 1e-3};
    CHECK_NOTHROW(grid.validate());
    CHECK(grid.n_steps() == 1000);
    CHECK_THROWS_AS((TimeGrid{1.0, 0.0, 1e-3}.validate()), ConfigError);
    CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 0.0}.validate()), ConfigError);
    CHECK_THROWS_AS((TimeGrid{0.0, 100.0, 1e-9}.validate()), ConfigError); // > 1e7 steps
}

TEST_CASE("recommended_dt respects the phase-per-step rule") {
    const SystemSpec sys = two_level(3.0);
    PulseSpec pulse;
    pulse.fwhm = 2.0;
    pulse.peak_rabi = 8.0;
    pulse.chirp = ChirpCoefficients({0, 0, 2.0});
    const double dt = recommended_dt(sys, pulse, -6.0, 6.0);
    // max rate: |delta| at the grid edge, 3 + 2*2*6 = 27 rad/ps
    CHECK(dt <= 0.05 / 27.0 * (1 + 1e-9));
    CHECK(dt > 0.0);
}

TEST_CASE("store_stride keeps at least the target samples") {
    CHECK(store_stride(10000, 2000) == 5);
    CHECK(store_stride(100, 2000) == 1);
    CHECK(store_stride(0, 2000) == 1);
}

TEST_CASE("zero field leaves populations exactly constant") {
    const SystemSpec sys = two_level(1.7);
    PulseSpec pulse;
    pulse.fwhm = 2.0;
    pulse.peak_rabi = 0.0;
    const TimeGrid grid{-3.0, 3.0, 1e-3};
    for (auto* prop : {&propagate, &propagate_oracle}) {
        const Trajectory traj = (*prop)(sys, pulse, basis_state(2, 0), grid, 2000);
        CHECK(traj.final_populations()[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(traj.final_populations()[1] == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("two-level area theorem") {
    const SystemSpec sys = two_level(0.0);
    const TimeGrid grid{-8.0, 8.0, 1e-3};
    const DensityMatrix rho0 = basis_state(2, 0);
    // on resonance the final excited population is sin^2(area/2)
    struct Row { double area, expected; };
    for (const Row& row : {Row{M_PI, 1.0}, Row{2 * M_PI, 0.0}, Row{M_PI / 2, 0.5}}) {
        const PulseSpec pulse = gaussian_area_pulse(row.area);
        const Trajectory rk4 = propagate(sys, pulse, rho0, grid);
        const Trajectory oracle = propagate_oracle(sys, pulse, rho0, grid);
        CHECK(rk4.final_populations()[1] == doctest::Approx(row.expected).epsilon(1e-4));
        CHECK(oracle.final_populations()[1] == doctest::Approx(row.expected).epsilon(1e-4));
    }
}

TEST_CASE("excited population initially increases from the ground state") {
    const SystemSpec sys = two_level(0.0);
    const PulseSpec pulse = gaussian_area_pulse(M_PI);
    const Trajectory traj = propagate(sys, pulse, basis_state(2, 0), TimeGrid{-8.0, 8.0, 1e-3});
    bool increased = false;
    for (std::size_t s = 1; s < traj.n_samples(); ++s) {
        const double p = traj.populations[s][1];
        if (p < -1e-12) break;
        if (p > 1e-6) { increased = true; break; }
    }
    CHECK(increased);
}

TEST_CASE("RK4 and oracle agree on a chirped run") {
    const SystemSpec sys = two_level(0.0);
    PulseSpec pulse;
    pulse.fwhm = 2.0;
    pulse.peak_rabi = 8.0;
    pulse.chirp = ChirpCoefficients({0, 0, 2.0});
    const TimeGrid grid{-6.0, 6.0, 1e-3};
    const Trajectory a = propagate(sys, pulse, basis_state(2, 0), grid);
    const Trajectory b = propagate_oracle(sys, pulse, basis_state(2, 0), grid);
    REQUIRE(a.n_samples() == b.n_samples());
    double max_dev = 0.0;
    for (std::size_t s = 0; s < a.n_samples(); ++s)
        for (int i = 0; i < 2; ++i)
            max_dev = std::max(max_dev,
                               std::abs(a.populations[s][static_cast<std::size_t>(i)] -
                                        b.populations[s][static_cast<std::size_t>(i)]));
    CHECK(max_dev <= 1e-6);
}

TEST_CASE("trace and purity are conserved") {
    const SystemSpec sys = two_level(1.0);
    PulseSpec pulse;
    pulse.fwhm = 2.0;
    pulse.peak_rabi = 5.0;
    pulse.chirp = ChirpCoefficients({0, 0, 1.0, 0.1});
    const Trajectory traj = propagate(sys, pulse, basis_state(2, 0), TimeGrid{-6.0, 6.0, 5e-4});
    const double purity0 = traj.rhos.front().squaredNorm();
    for (std::size_t s = 0; s < traj.n_samples(); ++s) {
        CHECK(std::abs(traj.rhos[s].trace().real() - 1.0) <= 1e-9);
        CHECK(std::abs(traj.rhos[s].squaredNorm() - purity0) <= 1e-7);
        double pop_sum = 0.0;
        for (double p : traj.populations[s]) pop_sum += p;
        CHECK(pop_sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("convergence_check") {
    const SystemSpec sys = two_level(0.0);
    const DensityMatrix rho0 = basis_state(2, 0);

    SUBCASE("zero field deviates by nothing") {
        PulseSpec pulse;
        pulse.fwhm = 2.0;
        pulse.peak_rabi = 0.0;
        const ConvergenceReport r = convergence_check(sys, pulse, rho0, TimeGrid{-2.0, 2.0, 1e-2});
        CHECK(r.max_population_deviation == 0.0);
        CHECK(r.converged);
    }
    SUBCASE("pi pulse at adequate dt") {
        const ConvergenceReport r =
            convergence_check(sys, gaussian_area_pulse(M_PI), rho0, TimeGrid{-8.0, 8.0, 1e-3});
        CHECK(r.max_population_deviation < 1e-8);
        CHECK(r.converged);
    }
    SUBCASE("coarse dt is flagged") {
        // ~10 steps per Rabi period: Omega ~ 2.6, period 2.4 ps, dt 0.24
        const ConvergenceReport r =
            convergence_check(sys, gaussian_area_pulse(4 * M_PI), rho0, TimeGrid{-8.0, 8.0, 0.24});
        CHECK_FALSE(r.converged);
    }
}

TEST_CASE("integration failure names the offending time") {
    const SystemSpec sys = two_level(0.0);
    PulseSpec pulse;
    pulse.fwhm = 20.0;
    pulse.peak_rabi = 50.0;
    // Omega*dt = 25 is far beyond RK4 stability; the health check must trip
    CHECK_THROWS_AS(propagate(sys, pulse, basis_state(2, 0), TimeGrid{-30.0, 30.0, 0.5}),
                    IntegrationError);
}

TEST_CASE("dimension mismatch is rejected") {
    const SystemSpec sys = two_level(0.0);
    PulseSpec pulse;
    pulse.fwhm = 1.0;
    pulse.peak_rabi = 0.0;
    CHECK_THROWS_AS(propagate(sys, pulse, basis_state(3, 0), TimeGrid{0.0, 1.0, 1e-2}),
                    ConfigError);
}
