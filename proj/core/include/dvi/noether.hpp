// Momentum pairings for symmetry generators: weighted charges that stay
// constant along trajectories of invariant potentials, their decay-frame
// counterparts, per-step ratios of the unweighted momenta, and a random
// probe certifying potential invariance under a generator.
#pragma once

#include "dvi/generators.hpp"
#include "dvi/integrator.hpp"
#include "dvi/model.hpp"

#include <cstdint>
#include <vector>

namespace dvi {

// Weighted charge of interval k: ⟨D₁L_d^k(q0,q1), ξ(q0)⟩, i.e. minus the
// pairing of the pre-momentum with the generator field.  Constant in k
// along trajectories when V is invariant under the generator.
double noether_charge(const DampedLagrangianModel& model,
                      const NoetherGenerator& gen, long long k, double h,
                      const Vector& q0, const Vector& q1);

// The same pairing with the common weight a_k divided out.  Along
// trajectories of an invariant V this decays exactly like e^{−c·k·h},
// which keeps conservation checks well conditioned on long runs.
double noether_charge_core(const DampedLagrangianModel& model,
                           const NoetherGenerator& gen, double h,
                           const Vector& q0, const Vector& q1);

// Per-step ratios m_{k+1}/m_k of the unweighted momentum
// m_k = ⟨(q_{k+1}−q_k)/h, ξ(q_k)⟩ along a trajectory.  For V ≡ 0 every
// ratio equals e^{−c·h}: the plain momentum decays at the damping rate
// while the weighted charge above stays constant.
std::vector<double> scaled_momentum_ratio(const DampedLagrangianModel& model,
                                          const NoetherGenerator& gen,
                                          const Trajectory& trajectory);

// Max over random probe points q ~ U[−2,2]^dim of
// |V(exp(ε·gen)·q) − V(q)| / ε at ε = 1e-5.  Near zero certifies that
// the potential is invariant under the generator's action.
double invariance_probe(const DampedLagrangianModel& model,
                        const NoetherGenerator& gen, int samples,
                        std::uint64_t seed);

}  // namespace dvi
