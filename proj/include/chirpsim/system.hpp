#ifndef CHIRPSIM_SYSTEM_HPP
#define CHIRPSIM_SYSTEM_HPP

#include "chirpsim/pulse.hpp"

#include <Eigen/Dense>

#include <map>
#include <utility>
#include <vector>

namespace chirpsim {

using HamiltonianMatrix = Eigen::MatrixXcd;

/// Level system in the zero-order basis |0>, |1>, ... Ground is index 0 and
/// carries no detuning; intramolecular couplings V_ij live on the non-ground
/// block and are symmetric. All energies in rad/ps.
struct SystemSpec {
    int n_levels = 2;
    std::vector<double> detunings;                    ///< Delta_i for levels 1..n-1
    std::map<std::pair<int, int>, double> couplings;  ///< (i,j), i<j, both >= 1
    std::vector<int> bright;                          ///< levels optically coupled to ground
    std::vector<double> bright_weights;               ///< relative weight per bright level

    void validate() const;
    bool is_bright(int level) const;
};

/// FM-frame Hamiltonian at time t. Diagonal carries Delta_i + N*phidot(t-center),
/// the ground row couples to bright levels with weight*Omega(t) (times 1/2 for
/// the two-level system, matching the printed matrices), V_ij fills the
/// non-ground block. Hermitian by construction.
HamiltonianMatrix build_hamiltonian(const SystemSpec& sys, const PulseSpec& pulse, double t);

namespace detail {
/// Same as build_hamiltonian but assumes already-validated inputs; for
/// per-step use inside integrator loops.
HamiltonianMatrix build_hamiltonian_unchecked(const SystemSpec& sys, const PulseSpec& pulse,
                                              double t);
} // namespace detail

/// Five-level anthracene model: one bright state plus three dark states with
/// the quantum-beat detunings and couplings (entered in GHz, stored in rad/ps).
SystemSpec anthracene_preset();

/// Sparsity pattern of the ten-level tier model: three bright tiers feeding
/// successive shells of dark states.
const std::vector<std::pair<int, int>>& tier_coupling_pattern();

/// Ten-level tier model with bright levels {1,2,3}. Couplings outside the
/// tier pattern are rejected. Detunings and couplings in rad/ps.
SystemSpec tier_preset(const std::vector<double>& detunings,
                       const std::map<std::pair<int, int>, double>& couplings,
                       const std::vector<double>& bright_weights);

} // namespace chirpsim

#endif
