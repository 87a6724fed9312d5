// Trapezoidal variational integrator implementation: closed-form
// per-interval quantities and trajectory assembly with diagnostics.

#include "dvi/integrator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dvi {

// ===== Run description =====

void IntegratorConfig::validate(int dim) const {
  require_positive_step(step);
  if (steps < 2) {
    throw std::invalid_argument("steps must be >= 2, got " +
                                std::to_string(steps));
  }
  if (initial_position.size() != dim || initial_velocity.size() != dim) {
    throw std::invalid_argument(
        "initial position/velocity must match the model dimension " +
        std::to_string(dim));
  }
  if (!initial_position.allFinite() || !initial_velocity.allFinite()) {
    throw std::invalid_argument("initial state contains non-finite entries");
  }
  if (!(overflow_guard > 0.0)) {
    throw std::invalid_argument("overflow guard must be positive");
  }
}

// ===== Per-interval quantities =====

namespace {

// Shared argument screening for the per-interval operations.
void check_interval_args(const DampedLagrangianModel& model, double h,
                         const Vector& q0, const Vector& q1) {
  model.validate();
  require_positive_step(h);
  require_state(model, q0, "q0");
  require_state(model, q1, "q1");
}

}  // namespace

double discrete_lagrangian(const DampedLagrangianModel& model, long long k,
                           double h, const Vector& q0, const Vector& q1) {
  check_interval_args(model, h, q0, q1);
  const double ech = std::exp(model.damping * h);
  const double theta = log_step_weight(model.damping, k, h);
  // Factor the common weight a_k out of a_k + a_{k+1} = a_k(1 + e^{ch})
  // so the overflow-safe scalar product is applied exactly once.
  const double kinetic = (1.0 + ech) / (4.0 * h) * (q1 - q0).squaredNorm();
  const double weighted_potential =
      0.5 * h * (model.potential(q0) + ech * model.potential(q1));
  return weighted_value(theta, kinetic - weighted_potential);
}

Vector discrete_momentum_pre_core(const DampedLagrangianModel& model, double h,
                                  const Vector& q0, const Vector& q1) {
  check_interval_args(model, h, q0, q1);
  const double ech = std::exp(model.damping * h);
  return (1.0 + ech) / (2.0 * h) * (q1 - q0) +
         0.5 * h * model.potential_gradient(q0);
}

Vector discrete_momentum_post_core(const DampedLagrangianModel& model,
                                   double h, const Vector& q0,
                                   const Vector& q1) {
  check_interval_args(model, h, q0, q1);
  const double ech = std::exp(model.damping * h);
  return (1.0 + ech) / (2.0 * h) * (q1 - q0) -
         0.5 * h * ech * model.potential_gradient(q1);
}

Vector discrete_momentum_pre(const DampedLagrangianModel& model, long long k,
                             double h, const Vector& q0, const Vector& q1) {
  const double theta = log_step_weight(model.damping, k, h);
  return weighted_vector(theta, discrete_momentum_pre_core(model, h, q0, q1));
}

Vector discrete_momentum_post(const DampedLagrangianModel& model, long long k,
                              double h, const Vector& q0, const Vector& q1) {
  const double theta = log_step_weight(model.damping, k, h);
  return weighted_vector(theta, discrete_momentum_post_core(model, h, q0, q1));
}

Vector del_residual(const DampedLagrangianModel& model, long long k, double h,
                    const Vector& q0, const Vector& q1, const Vector& q2) {
  require_state(model, q2, "q2");
  // Stationarity at the shared node q1: the post-momentum of interval k
  // must hand off exactly to the pre-momentum of interval k+1.
  return discrete_momentum_post(model, k, h, q0, q1) -
         discrete_momentum_pre(model, k + 1, h, q1, q2);
}

Vector explicit_step(const DampedLagrangianModel& model, long long k, double h,
                     const Vector& q0, const Vector& q1) {
  check_interval_args(model, h, q0, q1);
  (void)k;  // consecutive weights share the ratio e^{ch}, so k cancels
  const double c = model.damping;
  const double decay = std::exp(-c * h);           // e^{−ch}
  const double force = 2.0 * h * h / (1.0 + std::exp(c * h));
  return (1.0 + decay) * q1 - decay * q0 - force * model.potential_gradient(q1);
}

double discrete_energy(const DampedLagrangianModel& model, long long k,
                       double h, const Vector& q0, const Vector& q1) {
  check_interval_args(model, h, q0, q1);
  const double ech = std::exp(model.damping * h);
  const double theta = log_step_weight(model.damping, k, h);
  const double kinetic = (1.0 + ech) / (4.0 * h) * (q1 - q0).squaredNorm();
  const double weighted_potential =
      0.5 * h * (model.potential(q0) + ech * model.potential(q1));
  return weighted_value(theta, kinetic + weighted_potential);
}

double interval_energy(const DampedLagrangianModel& model, double h,
                       const Vector& q0, const Vector& q1) {
  check_interval_args(model, h, q0, q1);
  return 0.5 * ((q1 - q0) / h).squaredNorm() +
         0.5 * (model.potential(q0) + model.potential(q1));
}

// ===== Trajectory assembly =====

namespace {

bool within_guard(const Vector& q, double guard) {
  return q.allFinite() && q.cwiseAbs().maxCoeff() <= guard;
}

// Fills the per-node diagnostics shared by both integrators.  `points`
// already carries q (and p for the variational path).
void fill_common_diagnostics(const DampedLagrangianModel& model, double h,
                             Trajectory& out) {
  const std::size_t count = out.points.size();
  out.velocities.resize(count);
  out.unweighted_energies.resize(count);
  if (count == 1) {
    out.velocities[0] = Vector::Zero(model.dim);
    out.unweighted_energies[0] = model.potential(out.points[0].q);
    return;
  }
  for (std::size_t i = 0; i + 1 < count; ++i) {
    out.velocities[i] = (out.points[i + 1].q - out.points[i].q) / h;
    out.unweighted_energies[i] =
        interval_energy(model, h, out.points[i].q, out.points[i + 1].q);
  }
  // The last node reuses the trailing interval: backward difference for
  // the velocity, repeated interval energy for the energy row.
  out.velocities[count - 1] = out.velocities[count - 2];
  out.unweighted_energies[count - 1] = out.unweighted_energies[count - 2];
}

}  // namespace

Trajectory integrate(const DampedLagrangianModel& model,
                     const IntegratorConfig& config,
                     const std::vector<NoetherGenerator>& generators) {
  model.validate();
  config.validate(model.dim);
  for (const NoetherGenerator& gen : generators) gen.validate();

  const double h = config.step;
  const double c = model.damping;
  const long long n_steps = config.steps;

  Trajectory out;
  out.step = h;
  out.points.reserve(static_cast<std::size_t>(n_steps) + 1);

  // Position pass: kinematic seed then repeated explicit updates, with
  // the overflow guard rejecting the first out-of-range point.
  std::vector<Vector> q;
  q.reserve(static_cast<std::size_t>(n_steps) + 1);
  q.push_back(config.initial_position);
  {
    Vector q1 = config.initial_position + h * config.initial_velocity;
    if (!within_guard(q1, config.overflow_guard)) {
      out.diverged_at = 1;
    } else {
      q.push_back(std::move(q1));
      for (long long k = 0; k + 2 <= n_steps; ++k) {
        Vector next = explicit_step(model, k, h, q[static_cast<std::size_t>(k)],
                                    q[static_cast<std::size_t>(k) + 1]);
        if (!within_guard(next, config.overflow_guard)) {
          out.diverged_at = k + 2;
          break;
        }
        q.push_back(std::move(next));
      }
    }
  }

  const std::size_t count = q.size();
  const long long last = static_cast<long long>(count) - 1;

  // Momentum pass.  Interior nodes take the pre-momentum of their right
  // interval; the final node takes the post-momentum of its left one.
  out.points.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    PhasePoint& pt = out.points[i];
    pt.index = static_cast<long long>(i);
    pt.time = static_cast<double>(pt.index) * h;
    pt.q = q[i];
    if (static_cast<long long>(i) < last) {
      pt.p = discrete_momentum_pre(model, pt.index, h, q[i], q[i + 1]);
    } else if (last >= 1) {
      pt.p = discrete_momentum_post(model, last - 1, h, q[i - 1], q[i]);
    } else {
      pt.p = Vector::Zero(model.dim);
    }
  }

  // Conjugate-to-time momentum: mu_0 balances the initial energy, then
  // each interval adds c times its action (time translation changes the
  // action only through the exponential weights).
  if (!out.points.empty()) {
    const Vector& p0 = out.points[0].p;
    double mu = -(0.5 * p0.squaredNorm() + model.potential(q[0]));
    out.points[0].mu = mu;
    double carry = 0.0;  // compensated summation of the increments
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const double increment =
          c * discrete_lagrangian(model, static_cast<long long>(i), h, q[i],
                                  q[i + 1]);
      const double y = increment - carry;
      const double t = mu + y;
      carry = (t - mu) - y;
      mu = t;
      out.points[i + 1].mu = mu;
    }
  }

  // Weighted energy rows; the final node repeats its left interval.
  out.energies.resize(count);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    out.energies[i] =
        discrete_energy(model, static_cast<long long>(i), h, q[i], q[i + 1]);
  }
  if (count >= 2) {
    out.energies[count - 1] = out.energies[count - 2];
  } else if (count == 1) {
    out.energies[0] = model.potential(q[0]);
  }

  // Node-centered update residual; the boundary nodes have no triplet.
  out.residual_norms.assign(count, 0.0);
  for (std::size_t i = 1; i + 1 < count; ++i) {
    out.residual_norms[i] =
        del_residual(model, static_cast<long long>(i) - 1, h, q[i - 1], q[i],
                     q[i + 1])
            .norm();
  }

  // Momentum pairings per generator, one column each.  The pairing uses
  // the stored node momentum, so every row follows the same formula.
  out.charge_labels.reserve(generators.size());
  for (const NoetherGenerator& gen : generators) {
    out.charge_labels.push_back(gen.label);
  }
  out.charges.resize(static_cast<Eigen::Index>(count),
                     static_cast<Eigen::Index>(generators.size()));
  for (std::size_t g = 0; g < generators.size(); ++g) {
    for (std::size_t i = 0; i < count; ++i) {
      out.charges(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g)) =
          -out.points[i].p.dot(generators[g].field(out.points[i].q));
    }
  }

  fill_common_diagnostics(model, h, out);
  return out;
}

// ===== First-order Euler baseline =====

std::pair<Vector, Vector> euler_reference_step(
    const DampedLagrangianModel& model, double h, const Vector& q,
    const Vector& v) {
  check_interval_args(model, h, q, v);
  Vector q_next = q + h * v;
  Vector v_next = v + h * (-model.damping * v - model.potential_gradient(q));
  return {std::move(q_next), std::move(v_next)};
}

Trajectory euler_trajectory(const DampedLagrangianModel& model,
                            const IntegratorConfig& config) {
  model.validate();
  config.validate(model.dim);
  const double h = config.step;

  Trajectory out;
  out.step = h;
  out.points.reserve(static_cast<std::size_t>(config.steps) + 1);

  Vector q = config.initial_position;
  Vector v = config.initial_velocity;
  for (long long k = 0; k <= config.steps; ++k) {
    if (!within_guard(q, config.overflow_guard) || !v.allFinite() ||
        v.cwiseAbs().maxCoeff() > config.overflow_guard) {
      out.diverged_at = k;
      break;
    }
    PhasePoint pt;
    pt.index = k;
    pt.time = static_cast<double>(k) * h;
    pt.q = q;
    pt.p = v;  // the baseline carries plain velocity in the p slot
    out.points.push_back(std::move(pt));
    if (k < config.steps) {
      auto [q_next, v_next] = euler_reference_step(model, h, q, v);
      q = std::move(q_next);
      v = std::move(v_next);
    }
  }

  const std::size_t count = out.points.size();
  out.energies.assign(count, 0.0);
  out.residual_norms.assign(count, 0.0);
  out.charges.resize(static_cast<Eigen::Index>(count), 0);
  fill_common_diagnostics(model, h, out);
  // Euler has genuine per-node velocities; prefer them over differences.
  for (std::size_t i = 0; i < count; ++i) {
    out.velocities[i] = out.points[i].p;
    if (i + 1 < count) {
      out.unweighted_energies[i] = 0.5 * out.points[i].p.squaredNorm() +
                                   model.potential(out.points[i].q);
    }
  }
  if (count >= 1) {
    out.unweighted_energies[count - 1] =
        0.5 * out.points[count - 1].p.squaredNorm() +
        model.potential(out.points[count - 1].q);
  }
  return out;
}

}  // namespace dvi
