#ifndef CHIRPSIM_PROPAGATOR_HPP
#define CHIRPSIM_PROPAGATOR_HPP

#include "chirpsim/pulse.hpp"
#include "chirpsim/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace chirpsim {

using DensityMatrix = Eigen::MatrixXcd;

/// Hermiticity / unit-trace / positivity checks for a density matrix.
void validate_density_matrix(const DensityMatrix& rho);

/// Pure basis state |level><level| of dimension n.
DensityMatrix basis_state(int n, int level);

struct TimeGrid {
    double t_start = 0.0; ///< ps
    double t_end = 1.0;   ///< ps
    double dt = 1e-3;     ///< ps

    void validate() const;
    long n_steps() const;
};

/// Step size satisfying max(|Omega|, |delta|) * dt <= phase_per_step over the
/// grid (scanned on a fine subgrid). Used as the default dt when a scenario
/// gives none.
double recommended_dt(const SystemSpec& sys, const PulseSpec& pulse, double t_start,
                      double t_end, double phase_per_step = 0.05);

struct Trajectory {
    std::vector<double> times;                    ///< ps, stored samples
    std::vector<DensityMatrix> rhos;              ///< one per stored sample
    std::vector<std::vector<double>> populations; ///< [sample][level]
    std::vector<std::vector<double>> coherences;  ///< |rho_0i|, [sample][i-1]
    TimeGrid grid;
    SystemSpec system;
    PulseSpec pulse;

    std::size_t n_samples() const { return times.size(); }
    const DensityMatrix& final_rho() const { return rhos.back(); }
    const std::vector<double>& final_populations() const { return populations.back(); }
};

/// Stride so that at least target_samples evenly spaced samples are kept.
long store_stride(long n_steps, long target_samples = 2000);

/// Classic fixed-step RK4 on the Liouville-von Neumann equation
/// drho/dt = i [rho, H(t)] (hbar = 1), Hermitian part enforced after each
/// step. Trace drift beyond 1e-6 or an eigenvalue below -1e-6 at a stored
/// sample raises IntegrationError. No trace renormalization: drift is the
/// failure signal, not something to hide.
Trajectory propagate(const SystemSpec& sys, const PulseSpec& pulse,
                     const DensityMatrix& rho0, const TimeGrid& grid,
                     long target_samples = 2000);

/// Independent reference propagator: per-step unitary U = exp(-i H(t_mid) dt)
/// via eigendecomposition of the Hermitian H, applied as rho -> U rho U+.
/// Trace- and positivity-preserving by construction.
Trajectory propagate_oracle(const SystemSpec& sys, const PulseSpec& pulse,
                            const DensityMatrix& rho0, const TimeGrid& grid,
                            long target_samples = 2000);

struct ConvergenceReport {
    double max_population_deviation = 0.0; ///< between dt and dt/2 runs
    bool converged = true;                 ///< deviation <= threshold
    double threshold = 1e-6;
};

/// Compares propagate at dt and dt/2; flags non-convergence above 1e-6.
ConvergenceReport convergence_check(const SystemSpec& sys, const PulseSpec& pulse,
                                    const DensityMatrix& rho0, const TimeGrid& grid);

} // namespace chirpsim

#endif
