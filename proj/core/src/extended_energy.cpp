// Extended-energy drift along trajectories, evaluated in a half-weight
// frame that keeps every intermediate bounded on long damped runs.

#include "dvi/extended_energy.hpp"

#include <cmath>
#include <vector>

namespace dvi {

namespace {

// Streaming evaluation over consecutive positions.  All pieces carry
// half or whole step weights attached directly to decaying factors, so
// products like e^{c·t}·‖Δq‖² never form the indeterminate inf·0:
//   u_j = e^{θ_j/2}·(q_{j+1}−q_j),  w_j = e^{θ_j/2}·∇V(q_j),
//   Ĥ_j = ½‖(1+e^{ch})/(2h)·u_j + (h/2)·w_j‖² + e^{θ_j}V(q_j),
// and the conjugate-to-time momentum gains c·L_d per interval, giving
// the telescoped increment δ_j = c·L_d^j + (Ĥ_{j+1} − Ĥ_j).
class DriftAccumulator {
 public:
  DriftAccumulator(const DampedLagrangianModel& model, double h)
      : model_(model),
        h_(h),
        c_(model.damping),
        e_ch_(std::exp(model.damping * h)),
        e_mch_(std::exp(-model.damping * h)) {}

  // Feeds node j (with its successor's position still unknown when
  // j == last).  Returns the drift value at node j.
  void start(const Vector& q0, const Vector& q1) {
    const Vector grad0 = model_.potential_gradient(q0);
    head_energy_ = pre_energy(0, q0, q1, grad0);
    head_action_ = action(0, q0, q1);
    drift_.push_back(0.0);
  }

  // Advances over interval j → j+1 where q2 = q[j+2] exists.
  void interior(long long j, const Vector& q1, const Vector& q2) {
    const Vector grad1 = model_.potential_gradient(q1);
    const double next_energy = pre_energy(j + 1, q1, q2, grad1);
    push(c_ * head_action_ + (next_energy - head_energy_));
    head_energy_ = next_energy;
    head_action_ = action(j + 1, q1, q2);
  }

  // Closes the sequence at the final node using the post-momentum form.
  void finish(long long last, const Vector& q_prev, const Vector& q_last) {
    const Vector grad = model_.potential_gradient(q_last);
    const double theta = log_step_weight(c_, last, h_);
    const Vector u = weighted_vector(0.5 * theta, q_last - q_prev);
    const Vector w = weighted_vector(0.5 * theta, grad);
    const Vector r = (1.0 + e_mch_) / (2.0 * h_) * u - 0.5 * h_ * w;
    const double energy =
        0.5 * r.squaredNorm() + weighted_value(theta, model_.potential(q_last));
    push(c_ * head_action_ + (energy - head_energy_));
  }

  std::vector<double> take() { return std::move(drift_); }

 private:
  // Energy at node j from the pre-momentum of interval [t_j, t_{j+1}].
  double pre_energy(long long j, const Vector& q0, const Vector& q1,
                    const Vector& grad0) {
    const double theta = log_step_weight(c_, j, h_);
    const Vector u = weighted_vector(0.5 * theta, q1 - q0);
    const Vector w = weighted_vector(0.5 * theta, grad0);
    const Vector r = (1.0 + e_ch_) / (2.0 * h_) * u + 0.5 * h_ * w;
    return 0.5 * r.squaredNorm() + weighted_value(theta, model_.potential(q0));
  }

  // Discrete action of interval j in the same overflow-safe pieces.
  double action(long long j, const Vector& q0, const Vector& q1) {
    const double theta = log_step_weight(c_, j, h_);
    const Vector u = weighted_vector(0.5 * theta, q1 - q0);
    const double w0 = weighted_value(theta, model_.potential(q0));
    const double w1 = weighted_value(theta + c_ * h_, model_.potential(q1));
    return (1.0 + e_ch_) / (4.0 * h_) * u.squaredNorm() - 0.5 * h_ * (w0 + w1);
  }

  void push(double increment) {
    // Compensated running sum of the increments.
    const double y = increment - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
    drift_.push_back(sum_);
  }

  const DampedLagrangianModel& model_;
  double h_;
  double c_;
  double e_ch_;
  double e_mch_;
  double head_energy_ = 0.0;
  double head_action_ = 0.0;
  double sum_ = 0.0;
  double carry_ = 0.0;
  std::vector<double> drift_;
};

}  // namespace

std::vector<double> extended_energy_drift(const DampedLagrangianModel& model,
                                          const IntegratorConfig& config) {
  model.validate();
  config.validate(model.dim);
  const double h = config.step;

  // Position-only streaming: only a sliding window of two nodes is kept.
  Vector q0 = config.initial_position;
  Vector q1 = config.initial_position + h * config.initial_velocity;
  if (!q1.allFinite() || q1.cwiseAbs().maxCoeff() > config.overflow_guard) {
    return {0.0};
  }

  DriftAccumulator acc(model, h);
  acc.start(q0, q1);
  long long j = 0;
  for (; j + 2 <= config.steps; ++j) {
    Vector q2 = explicit_step(model, j, h, q0, q1);
    if (!q2.allFinite() || q2.cwiseAbs().maxCoeff() > config.overflow_guard) {
      break;
    }
    acc.interior(j, q1, q2);
    q0 = std::move(q1);
    q1 = std::move(q2);
  }
  acc.finish(j + 1, q0, q1);
  return acc.take();
}

std::vector<double> extended_energy_drift(const DampedLagrangianModel& model,
                                          const Trajectory& trajectory) {
  model.validate();
  const auto& pts = trajectory.points;
  if (pts.size() < 2) return {0.0};
  const double h = trajectory.step;

  DriftAccumulator acc(model, h);
  acc.start(pts[0].q, pts[1].q);
  for (std::size_t j = 0; j + 2 < pts.size(); ++j) {
    acc.interior(static_cast<long long>(j), pts[j + 1].q, pts[j + 2].q);
  }
  acc.finish(static_cast<long long>(pts.size()) - 1, pts[pts.size() - 2].q,
             pts.back().q);
  return acc.take();
}

}  // namespace dvi
