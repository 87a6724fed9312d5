// Symmetry generators (fields, exact group actions, factories) and the
// momentum pairings built on them.

#include "dvi/noether.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace dvi {

// ===== Generator validation =====

void NoetherGenerator::validate() const {
  if (ambient_dim < 1) {
    throw std::invalid_argument("generator ambient dimension must be >= 1");
  }
  if (kind == Kind::translation) {
    if (direction.size() != ambient_dim) {
      throw std::invalid_argument(
          "translation direction must have the ambient dimension");
    }
    if (std::abs(direction.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("translation direction must be unit norm");
    }
    return;
  }
  // Rotation: either a coordinate plane or a 3D axis vector.
  if (plane_i >= 0) {
    if (plane_i == plane_j || plane_i >= ambient_dim || plane_j < 0 ||
        plane_j >= ambient_dim) {
      throw std::invalid_argument(
          "rotation plane indices must be distinct and below the ambient "
          "dimension");
    }
    return;
  }
  if (ambient_dim != 3 || axis.size() != 3 || axis.norm() == 0.0) {
    throw std::invalid_argument(
        "axis rotations need ambient dimension 3 and a nonzero 3-vector axis");
  }
}

// ===== Generator field and action =====

namespace {

void check_blocked(const NoetherGenerator& gen, const Vector& q) {
  gen.validate();
  if (q.size() % gen.ambient_dim != 0 || q.size() == 0) {
    throw std::invalid_argument(
        "configuration size " + std::to_string(q.size()) +
        " is not a multiple of the ambient dimension " +
        std::to_string(gen.ambient_dim));
  }
}

}  // namespace

Vector NoetherGenerator::field(const Vector& q) const {
  check_blocked(*this, q);
  const int d = ambient_dim;
  const Eigen::Index blocks = q.size() / d;
  Vector out = Vector::Zero(q.size());
  for (Eigen::Index b = 0; b < blocks; ++b) {
    auto block = q.segment(b * d, d);
    auto out_block = out.segment(b * d, d);
    switch (kind) {
      case Kind::translation:
        out_block = direction;
        break;
      case Kind::rotation:
        if (plane_i >= 0) {
          // Infinitesimal rotation of the (i,j) plane: ẋ_i = −x_j,
          // ẋ_j = +x_i, the derivative of the Givens rotation at 0.
          out_block[plane_i] = -block[plane_j];
          out_block[plane_j] = block[plane_i];
        } else {
          const Eigen::Vector3d a(axis[0], axis[1], axis[2]);
          const Eigen::Vector3d x(block[0], block[1], block[2]);
          out_block = a.cross(x);
        }
        break;
    }
  }
  return out;
}

Vector NoetherGenerator::apply(const Vector& q, double eps) const {
  check_blocked(*this, q);
  const int d = ambient_dim;
  const Eigen::Index blocks = q.size() / d;
  Vector out = q;
  if (kind == Kind::translation) {
    for (Eigen::Index b = 0; b < blocks; ++b) {
      out.segment(b * d, d) += eps * direction;
    }
    return out;
  }
  if (plane_i >= 0) {
    const double cs = std::cos(eps), sn = std::sin(eps);
    for (Eigen::Index b = 0; b < blocks; ++b) {
      const double xi = q[b * d + plane_i];
      const double xj = q[b * d + plane_j];
      out[b * d + plane_i] = cs * xi - sn * xj;
      out[b * d + plane_j] = sn * xi + cs * xj;
    }
    return out;
  }
  // Axis rotation by angle eps·‖axis‖ about axis/‖axis‖ (Rodrigues).
  const Eigen::Vector3d n(axis[0], axis[1], axis[2]);
  const double angle = eps * n.norm();
  const Eigen::AngleAxisd rot(angle, n.normalized());
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Vector3d x(q[b * d], q[b * d + 1], q[b * d + 2]);
    out.segment(b * d, 3) = rot * x;
  }
  return out;
}

// ===== Factories =====

NoetherGenerator translation_generator(int ambient_dim,
                                       const Vector& direction) {
  NoetherGenerator gen;
  gen.kind = NoetherGenerator::Kind::translation;
  gen.ambient_dim = ambient_dim;
  if (direction.size() != ambient_dim || direction.norm() == 0.0) {
    throw std::invalid_argument(
        "translation direction must be a nonzero vector of the ambient "
        "dimension");
  }
  gen.direction = direction.normalized();
  gen.label = "T";
  for (Eigen::Index i = 0; i < direction.size(); ++i) {
    gen.label += (std::abs(gen.direction[i]) > 1e-12)
                     ? std::string(1, static_cast<char>('x' + (i % 3)))
                     : "";
  }
  gen.validate();
  return gen;
}

NoetherGenerator rotation_generator(int ambient_dim, int i, int j) {
  NoetherGenerator gen;
  gen.kind = NoetherGenerator::Kind::rotation;
  gen.ambient_dim = ambient_dim;
  gen.plane_i = i;
  gen.plane_j = j;
  gen.label = "R" + std::string(1, static_cast<char>('x' + (i % 3))) +
              std::string(1, static_cast<char>('x' + (j % 3)));
  gen.validate();
  return gen;
}

NoetherGenerator rotation_generator_axis(const Vector& axis) {
  NoetherGenerator gen;
  gen.kind = NoetherGenerator::Kind::rotation;
  gen.ambient_dim = 3;
  gen.axis = axis;
  gen.label = "Raxis";
  gen.validate();
  return gen;
}

std::vector<NoetherGenerator> euclidean_generators(int ambient_dim) {
  if (ambient_dim < 1 || ambient_dim > 3) {
    throw std::invalid_argument(
        "euclidean_generators supports ambient dimensions 1..3");
  }
  std::vector<NoetherGenerator> gens;
  for (int i = 0; i < ambient_dim; ++i) {
    Vector dir = Vector::Zero(ambient_dim);
    dir[i] = 1.0;
    gens.push_back(translation_generator(ambient_dim, dir));
  }
  if (ambient_dim == 2) {
    gens.push_back(rotation_generator(2, 0, 1));
  } else if (ambient_dim == 3) {
    gens.push_back(rotation_generator(3, 0, 1));
    gens.push_back(rotation_generator(3, 0, 2));
    gens.push_back(rotation_generator(3, 1, 2));
  }
  return gens;
}

// ===== Momentum pairings =====

double noether_charge(const DampedLagrangianModel& model,
                      const NoetherGenerator& gen, long long k, double h,
                      const Vector& q0, const Vector& q1) {
  // ⟨D₁L_d, ξ⟩ = −⟨pre-momentum, ξ⟩; the weight is attached to the
  // scalar pairing so the overflow-safe product is applied once.
  const double theta = log_step_weight(model.damping, k, h);
  return weighted_value(theta, noether_charge_core(model, gen, h, q0, q1));
}

double noether_charge_core(const DampedLagrangianModel& model,
                           const NoetherGenerator& gen, double h,
                           const Vector& q0, const Vector& q1) {
  gen.validate();
  const Vector pre = discrete_momentum_pre_core(model, h, q0, q1);
  return -pre.dot(gen.field(q0));
}

std::vector<double> scaled_momentum_ratio(const DampedLagrangianModel& model,
                                          const NoetherGenerator& gen,
                                          const Trajectory& trajectory) {
  gen.validate();
  model.validate();
  const auto& pts = trajectory.points;
  std::vector<double> ratios;
  if (pts.size() < 3) return ratios;
  ratios.reserve(pts.size() - 2);
  const double h = trajectory.step;
  double prev = ((pts[1].q - pts[0].q) / h).dot(gen.field(pts[0].q));
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const double cur =
        ((pts[k + 1].q - pts[k].q) / h).dot(gen.field(pts[k].q));
    ratios.push_back(cur / prev);
    prev = cur;
  }
  return ratios;
}

double invariance_probe(const DampedLagrangianModel& model,
                        const NoetherGenerator& gen, int samples,
                        std::uint64_t seed) {
  model.validate();
  gen.validate();
  if (samples < 1) {
    throw std::invalid_argument("invariance_probe needs samples >= 1");
  }
  constexpr double kEps = 1e-5;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  double worst = 0.0;
  Vector q(model.dim);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < model.dim; ++i) q[i] = coord(rng);
    const double moved = model.potential(gen.apply(q, kEps));
    worst = std::max(worst, std::abs(moved - model.potential(q)) / kEps);
  }
  return worst;
}

}  // namespace dvi
