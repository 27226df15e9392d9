#include "chirpsim/propagator.hpp"

#include "chirpsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace chirpsim {

namespace {

using Complex = std::complex<double>;

Complex imag_unit() { return Complex(0.0, 1.0); }

void record_sample(Trajectory& traj, double t, const DensityMatrix& rho) {
    const int n = static_cast<int>(rho.rows());
    traj.times.push_back(t);
    traj.rhos.push_back(rho);
    std::vector<double> pops(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pops[static_cast<std::size_t>(i)] = rho(i, i).real();
    traj.populations.push_back(std::move(pops));
    std::vector<double> coh(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) coh[static_cast<std::size_t>(i - 1)] = std::abs(rho(0, i));
    traj.coherences.push_back(std::move(coh));
}

void check_health(const DensityMatrix& rho, double t) {
    const double trace_drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (trace_drift > 1e-6)
        throw IntegrationError("trace drift " + std::to_string(trace_drift) +
                               " exceeds 1e-6 (dt too large?)", t);
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-6)
        throw IntegrationError("negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()) +
                               " below -1e-6 (dt too large?)", t);
}

Trajectory make_trajectory_shell(const SystemSpec& sys, const PulseSpec& pulse,
                                 const DensityMatrix& rho0, const TimeGrid& grid) {
    sys.validate();
    pulse.validate();
    grid.validate();
    validate_density_matrix(rho0);
    if (rho0.rows() != sys.n_levels)
        throw ConfigError("propagate: rho0 dimension " + std::to_string(rho0.rows()) +
                          " does not match n_levels " + std::to_string(sys.n_levels));
    Trajectory traj;
    traj.grid = grid;
    traj.system = sys;
    traj.pulse = pulse;
    return traj;
}

} // namespace

void validate_density_matrix(const DensityMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw ConfigError("density matrix must be square and nonempty");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw ConfigError("density matrix not Hermitian: max |rho_ij - conj(rho_ji)| = " +
                          std::to_string(herm));
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-9)
        throw ConfigError("density matrix trace differs from 1 by more than 1e-9");
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw ConfigError("density matrix has eigenvalue below -1e-9");
}

DensityMatrix basis_state(int n, int level) {
    if (level < 0 || level >= n)
        throw ConfigError("basis_state: level " + std::to_string(level) + " out of range");
    DensityMatrix rho = DensityMatrix::Zero(n, n);
    rho(level, level) = 1.0;
    return rho;
}

void TimeGrid::validate() const {
    if (!(t_end > t_start)) throw ConfigError("grid: t_end must exceed t_start");
    if (!(dt > 0.0)) throw ConfigError("grid: dt must be > 0");
    if ((t_end - t_start) / dt > 1e7) throw ConfigError("grid: more than 1e7 steps requested");
}

long TimeGrid::n_steps() const {
    return static_cast<long>(std::llround((t_end - t_start) / dt));
}

double recommended_dt(const SystemSpec& sys, const PulseSpec& pulse, double t_start,
                      double t_end, double phase_per_step) {
    sys.validate();
    pulse.validate();
    double max_rate = 0.0;
    const int probes = 4000;
    for (int k = 0; k <= probes; ++k) {
        const double t = t_start + (t_end - t_start) * static_cast<double>(k) / probes;
        max_rate = std::max(max_rate, rabi_at(pulse, t));
        const double sweep = static_cast<double>(pulse.photon_order) *
                             sweep_at(pulse.chirp, t - pulse.center_time);
        for (double d : sys.detunings) max_rate = std::max(max_rate, std::abs(d + sweep));
    }
    if (max_rate <= 0.0) return (t_end - t_start) / 1000.0;
    return phase_per_step / max_rate;
}

long store_stride(long n_steps, long target_samples) {
    return std::max(1L, n_steps / std::max(1L, target_samples));
}

Trajectory propagate(const SystemSpec& sys, const PulseSpec& pulse,
                     const DensityMatrix& rho0, const TimeGrid& grid,
                     long target_samples) {
    Trajectory traj = make_trajectory_shell(sys, pulse, rho0, grid);
    const long steps = grid.n_steps();
    const long stride = store_stride(steps, target_samples);

    DensityMatrix rho = rho0;
    auto commutator = [](const DensityMatrix& r, const HamiltonianMatrix& H) -> DensityMatrix {
        return imag_unit() * (r * H - H * r);
    };
    for (long k = 0;; ++k) {
        const double t = grid.t_start + grid.dt * static_cast<double>(k);
        if (k % stride == 0 || k == steps) {
            record_sample(traj, t, rho);
            check_health(rho, t);
        }
        if (k == steps) break;
        const double h = grid.dt;
        const HamiltonianMatrix Ha = detail::build_hamiltonian_unchecked(sys, pulse, t);
        const HamiltonianMatrix Hm = detail::build_hamiltonian_unchecked(sys, pulse, t + h / 2.0);
        const HamiltonianMatrix Hb = detail::build_hamiltonian_unchecked(sys, pulse, t + h);
        const DensityMatrix k1 = commutator(rho, Ha);
        const DensityMatrix k2 = commutator(rho + (h / 2.0) * k1, Hm);
        const DensityMatrix k3 = commutator(rho + (h / 2.0) * k2, Hm);
        const DensityMatrix k4 = commutator(rho + h * k3, Hb);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
    }
    return traj;
}

Trajectory propagate_oracle(const SystemSpec& sys, const PulseSpec& pulse,
                            const DensityMatrix& rho0, const TimeGrid& grid,
                            long target_samples) {
    Trajectory traj = make_trajectory_shell(sys, pulse, rho0, grid);
    const long steps = grid.n_steps();
    const long stride = store_stride(steps, target_samples);

    DensityMatrix rho = rho0;
    for (long k = 0;; ++k) {
        const double t = grid.t_start + grid.dt * static_cast<double>(k);
        if (k % stride == 0 || k == steps) record_sample(traj, t, rho);
        if (k == steps) break;
        const HamiltonianMatrix H = detail::build_hamiltonian_unchecked(sys, pulse, t + grid.dt / 2.0);
        Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(H);
        const Eigen::VectorXcd phases =
            (-imag_unit() * grid.dt * es.eigenvalues().cast<Complex>().array()).exp();
        const DensityMatrix U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        rho = U * rho * U.adjoint();
    }
    return traj;
}

ConvergenceReport convergence_check(const SystemSpec& sys, const PulseSpec& pulse,
                                    const DensityMatrix& rho0, const TimeGrid& grid) {
    const Trajectory coarse = propagate(sys, pulse, rho0, grid);
    TimeGrid fine = grid;
    fine.dt = grid.dt / 2.0;
    const Trajectory refined = propagate(sys, pulse, rho0, fine);

    ConvergenceReport report;
    const auto& a = coarse.final_populations();
    const auto& b = refined.final_populations();
    for (std::size_t i = 0; i < a.size(); ++i)
        report.max_population_deviation =
            std::max(report.max_population_deviation, std::abs(a[i] - b[i]));
    report.converged = report.max_population_deviation <= report.threshold;
    return report;
}

} // namespace chirpsim
