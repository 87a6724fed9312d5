// Model validation, factory models, gradient verification, and the
// overflow-safe exponential weighting helpers.

#include "dvi/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace dvi {

// ===== Validation =====

void DampedLagrangianModel::validate() const {
  if (dim < 1) {
    throw std::invalid_argument("model dimension must be >= 1, got " +
                                std::to_string(dim));
  }
  if (!std::isfinite(damping)) {
    throw std::invalid_argument("model damping must be finite");
  }
  if (!potential || !potential_gradient) {
    throw std::invalid_argument(
        "model requires both potential and potential_gradient callables");
  }
}

void require_positive_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("time step must be positive and finite, got " +
                                std::to_string(h));
  }
}

void require_state(const DampedLagrangianModel& model, const Vector& v,
                   const char* what) {
  if (v.size() != model.dim) {
    throw std::invalid_argument(std::string(what) + " has size " +
                                std::to_string(v.size()) +
                                ", model dimension is " +
                                std::to_string(model.dim));
  }
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) +
                                " contains non-finite entries");
  }
}

// ===== Factory models =====

DampedLagrangianModel make_free_model(int dim, double damping) {
  DampedLagrangianModel model;
  model.dim = dim;
  model.damping = damping;
  model.potential = [](const Vector&) { return 0.0; };
  model.potential_gradient = [dim](const Vector&) {
    return Vector(Vector::Zero(dim));
  };
  model.validate();
  return model;
}

DampedLagrangianModel make_quadratic_model(int dim, double damping,
                                           double stiffness) {
  DampedLagrangianModel model;
  model.dim = dim;
  model.damping = damping;
  model.potential = [stiffness](const Vector& q) {
    return 0.5 * stiffness * q.squaredNorm();
  };
  model.potential_gradient = [stiffness](const Vector& q) {
    return Vector(stiffness * q);
  };
  model.validate();
  return model;
}

// ===== Gradient verification =====

double gradient_consistency(const DampedLagrangianModel& model, int samples,
                            std::uint64_t seed, double fd_step) {
  model.validate();
  if (samples < 1) {
    throw std::invalid_argument("gradient_consistency needs samples >= 1");
  }
  require_positive_step(fd_step);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);

  double worst = 0.0;
  Vector q(model.dim);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < model.dim; ++i) q[i] = coord(rng);
    const Vector grad = model.potential_gradient(q);
    for (int i = 0; i < model.dim; ++i) {
      Vector plus = q, minus = q;
      plus[i] += fd_step;
      minus[i] -= fd_step;
      const double fd =
          (model.potential(plus) - model.potential(minus)) / (2.0 * fd_step);
      const double scale = std::max({1.0, std::abs(fd), std::abs(grad[i])});
      worst = std::max(worst, std::abs(grad[i] - fd) / scale);
    }
  }
  return worst;
}

// ===== Overflow-safe exponential weighting =====

double weighted_value(double theta, double x) {
  if (x == 0.0) return 0.0;
  if (std::abs(theta) <= 700.0) return std::exp(theta) * x;
  // Route through logs: exp(theta + ln|x|) underflows to 0 or saturates
  // to inf without the inf·0 indeterminate form.
  const double magnitude = std::exp(theta + std::log(std::abs(x)));
  return x > 0.0 ? magnitude : -magnitude;
}

Vector weighted_vector(double theta, const Vector& x) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = weighted_value(theta, x[i]);
  }
  return out;
}

double log_step_weight(double damping, long long k, double h) {
  // The grid time is always k·h recomputed from the index.
  return damping * (static_cast<double>(k) * h);
}

}  // namespace dvi
