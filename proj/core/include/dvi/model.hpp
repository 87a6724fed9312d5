// Damped Lagrangian model description: configuration dimension, damping
// rate, potential, and potential gradient, plus the overflow-safe
// exponential weighting helpers shared by every time-dependent quantity.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace dvi {

using Vector = Eigen::VectorXd;

// ===== Model =====

// Mechanical system with Lagrangian e^{c·t}(½‖q̇‖² − V(q)).  The growing
// exponential weight absorbs linear-in-velocity damping: the resulting
// Euler–Lagrange equation is q̈ = −c·q̇ − ∇V(q), so c > 0 dissipates.
struct DampedLagrangianModel {
  int dim = 0;        // configuration dimension (n agents × d ambient)
  double damping = 0.0;  // c ≥ 0, per unit time
  std::function<double(const Vector&)> potential;
  std::function<Vector(const Vector&)> potential_gradient;

  // Throws std::invalid_argument when a field is unusable.
  void validate() const;
};

// V ≡ 0 in `dim` coordinates (free damped particle).
DampedLagrangianModel make_free_model(int dim, double damping);

// V(q) = (stiffness/2)·‖q‖², the isotropic oscillator.
DampedLagrangianModel make_quadratic_model(int dim, double damping,
                                           double stiffness = 1.0);

// Largest relative mismatch between potential_gradient and a central
// finite difference of potential over `samples` points drawn uniformly
// from [-2,2]^dim.  Small values certify the gradient implementation.
double gradient_consistency(const DampedLagrangianModel& model, int samples,
                            std::uint64_t seed, double fd_step = 1e-5);

// ===== Overflow-safe exponential weighting =====

// exp(theta)·x evaluated so extreme exponents underflow to 0 or saturate
// to ±inf without ever producing NaN from inf·0.  For |theta| ≤ 700 the
// product is formed directly; beyond that it is routed through logs.
double weighted_value(double theta, double x);

// Componentwise weighted_value.
Vector weighted_vector(double theta, const Vector& x);

// Logarithm c·k·h of the step weight e^{c·k·h}, always computed from the
// step index (never by accumulating products, which would drift).
double log_step_weight(double damping, long long k, double h);

// ===== Shared validation helpers =====

// Throws std::invalid_argument when h ≤ 0 or not finite.
void require_positive_step(double h);

// Throws std::invalid_argument when v has non-finite entries or its size
// differs from the model dimension.
void require_state(const DampedLagrangianModel& model, const Vector& v,
                   const char* what);

}  // namespace dvi
