// Fixed-step trapezoidal variational integrator for damped Lagrangian
// models: per-interval discrete Lagrangian, explicit position update,
// discrete momenta, energies, and trajectory assembly with diagnostics.
#pragma once

#include "dvi/generators.hpp"
#include "dvi/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dvi {

// ===== Run description =====

struct IntegratorConfig {
  double step = 0.0;          // h > 0, seconds
  long long steps = 0;        // N ≥ 2 position updates past q_0
  Vector initial_position;    // q(0)
  Vector initial_velocity;    // v(0); seeds q_1 = q_0 + h·v(0)
  double overflow_guard = 1e12;  // |q| component bound before declaring blow-up

  void validate(int dim) const;  // throws std::invalid_argument
};

// One grid node.  Momentum is the left-interval discrete momentum at
// every interior node and the right-interval one at the final node, so
// that the matching identity makes the sequence consistent throughout.
struct PhasePoint {
  long long index = 0;
  double time = 0.0;  // always index·step, never accumulated
  Vector q;
  Vector p;
  double mu = 0.0;  // conjugate-to-time momentum, diagnostic only
};

struct Trajectory {
  double step = 0.0;
  std::vector<PhasePoint> points;
  std::vector<Vector> velocities;           // forward differences; backward at the end
  std::vector<double> energies;             // weighted discrete energy per node
  std::vector<double> unweighted_energies;  // autonomous trapezoid per node
  std::vector<double> residual_norms;       // node-centered update residual
  std::vector<std::string> charge_labels;   // one per registered generator
  Eigen::MatrixXd charges;                  // rows: nodes, cols: generators
  std::optional<long long> diverged_at;     // index of the rejected point

  bool diverged() const { return diverged_at.has_value(); }
  long long last_index() const {
    return points.empty() ? -1 : points.back().index;
  }
};

// ===== Per-interval quantities =====

// Trapezoidal action over [t_k, t_{k+1}]:
//   L_d^k = (1/(4h))‖q1−q0‖²(a_k+a_{k+1}) − (h/2)(a_k V(q0) + a_{k+1} V(q1)),
// with weights a_k = e^{c·k·h}.
double discrete_lagrangian(const DampedLagrangianModel& model, long long k,
                           double h, const Vector& q0, const Vector& q1);

// Stationarity residual at the middle node of a position triplet: the
// sum of the outer slope of the (k+1)-interval action and the inner
// slope of the k-interval action.  Zero iff q2 continues (q0,q1).
Vector del_residual(const DampedLagrangianModel& model, long long k, double h,
                    const Vector& q0, const Vector& q1, const Vector& q2);

// Explicit update: q2 = (1+e^{−ch})·q1 − e^{−ch}·q0 − (2h²/(1+e^{ch}))·∇V(q1).
// Derived by solving del_residual = 0 for q2; the coefficients are
// independent of k because consecutive weights share the ratio e^{ch}.
Vector explicit_step(const DampedLagrangianModel& model, long long k, double h,
                     const Vector& q0, const Vector& q1);

// Discrete momenta of the interval [t_k, t_{k+1}]:
//   pre  = (1/(2h))(q1−q0)(a_k+a_{k+1}) + (h/2) a_k ∇V(q0)   (left leg)
//   post = (1/(2h))(q1−q0)(a_k+a_{k+1}) − (h/2) a_{k+1} ∇V(q1) (right leg)
// Along trajectories post at interval k equals pre at interval k+1.
Vector discrete_momentum_pre(const DampedLagrangianModel& model, long long k,
                             double h, const Vector& q0, const Vector& q1);
Vector discrete_momentum_post(const DampedLagrangianModel& model, long long k,
                              double h, const Vector& q0, const Vector& q1);

// Decay-frame momenta: the above with the common weight a_k divided out.
// These stay O(1) on converging runs and are the well-conditioned frame
// for long-horizon conservation checks.
Vector discrete_momentum_pre_core(const DampedLagrangianModel& model, double h,
                                  const Vector& q0, const Vector& q1);
Vector discrete_momentum_post_core(const DampedLagrangianModel& model,
                                   double h, const Vector& q0,
                                   const Vector& q1);

// Weighted discrete energy of the interval:
//   E_d = (1/(4h))‖q1−q0‖²(a_k+a_{k+1}) + (h/2)(a_k V(q0) + a_{k+1} V(q1)).
double discrete_energy(const DampedLagrangianModel& model, long long k,
                       double h, const Vector& q0, const Vector& q1);

// Autonomous trapezoidal energy ½‖(q1−q0)/h‖² + ½(V(q0)+V(q1)), the
// physical energy without exponential weights.
double interval_energy(const DampedLagrangianModel& model, double h,
                       const Vector& q0, const Vector& q1);

// ===== Trajectory assembly =====

// Runs N explicit updates from q_0 = initial_position and the kinematic
// seed q_1 = q_0 + h·v(0), filling per-node momenta, velocities, both
// energies, update residuals, and one momentum pairing column per
// generator.  A component exceeding overflow_guard stops the run early;
// the offending point is excluded and its index recorded.
Trajectory integrate(const DampedLagrangianModel& model,
                     const IntegratorConfig& config,
                     const std::vector<NoetherGenerator>& generators = {});

// ===== First-order Euler baseline =====

// One explicit Euler step of q̇ = v, v̇ = −c·v − ∇V(q).
std::pair<Vector, Vector> euler_reference_step(
    const DampedLagrangianModel& model, double h, const Vector& q,
    const Vector& v);

// Euler trajectory with the same seeding, overflow guard, and autonomous
// energy diagnostics as integrate(); weighted diagnostics are zero-filled
// because the baseline carries no discrete variational structure.
Trajectory euler_trajectory(const DampedLagrangianModel& model,
                            const IntegratorConfig& config);

}  // namespace dvi
