// Formation-control primitives: graph matrices, the quartic distance
// potential and its gradient, closed-loop dynamics, congruence tests,
// the step-size bound, and the shared four-agent reference scenario.

#include "dvi/formation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace dvi {

// ===== Validation =====

void GraphTopology::validate() const {
  if (node_count < 2) {
    throw std::invalid_argument("graph needs at least 2 nodes");
  }
  if (edges.empty()) {
    throw std::invalid_argument("graph needs at least one edge");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [tail, head] : edges) {
    if (tail < 0 || tail >= node_count || head < 0 || head >= node_count) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (tail == head) {
      throw std::invalid_argument("self-loop edges are not allowed");
    }
    const auto key = std::minmax(tail, head);
    if (!seen.insert({key.first, key.second}).second) {
      throw std::invalid_argument(
          "duplicate edge (up to orientation): (" + std::to_string(tail) +
          "," + std::to_string(head) + ")");
    }
  }
}

void FormationShape::validate() const {
  topology.validate();
  if (ambient_dim != 2 && ambient_dim != 3) {
    throw std::invalid_argument("ambient dimension must be 2 or 3");
  }
  if (desired_lengths.size() != topology.edges.size()) {
    throw std::invalid_argument(
        "desired_lengths must have one entry per edge");
  }
  for (double d : desired_lengths) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw std::invalid_argument("desired lengths must be positive finite");
    }
  }
}

namespace {

void check_stacked(const FormationShape& shape, const Vector& q,
                   const char* what) {
  if (q.size() != shape.stacked_dim()) {
    throw std::invalid_argument(std::string(what) + " has size " +
                                std::to_string(q.size()) + ", expected " +
                                std::to_string(shape.stacked_dim()));
  }
}

}  // namespace

// ===== Graph operations =====

Eigen::MatrixXd incidence_matrix(const GraphTopology& topology) {
  topology.validate();
  Eigen::MatrixXd b =
      Eigen::MatrixXd::Zero(topology.node_count, topology.edge_count());
  for (int w = 0; w < topology.edge_count(); ++w) {
    b(topology.edges[w].first, w) = 1.0;
    b(topology.edges[w].second, w) = -1.0;
  }
  return b;
}

Vector relative_positions(const FormationShape& shape,
                          const StackedConfiguration& q) {
  shape.validate();
  check_stacked(shape, q, "q");
  const int d = shape.ambient_dim;
  Vector z(shape.topology.edge_count() * d);
  for (int w = 0; w < shape.topology.edge_count(); ++w) {
    const auto& [tail, head] = shape.topology.edges[w];
    z.segment(w * d, d) = q.segment(tail * d, d) - q.segment(head * d, d);
  }
  return z;
}

Vector distance_errors(const FormationShape& shape,
                       const StackedConfiguration& q) {
  shape.validate();
  check_stacked(shape, q, "q");
  const int d = shape.ambient_dim;
  Vector e(shape.topology.edge_count());
  for (int w = 0; w < shape.topology.edge_count(); ++w) {
    const auto& [tail, head] = shape.topology.edges[w];
    const double len2 =
        (q.segment(tail * d, d) - q.segment(head * d, d)).squaredNorm();
    e[w] = len2 - shape.desired_lengths[static_cast<std::size_t>(w)] *
                      shape.desired_lengths[static_cast<std::size_t>(w)];
  }
  return e;
}

Eigen::MatrixXd rigidity_matrix(const FormationShape& shape,
                                const StackedConfiguration& q) {
  shape.validate();
  check_stacked(shape, q, "q");
  const int d = shape.ambient_dim;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(shape.topology.edge_count(),
                                            shape.stacked_dim());
  for (int w = 0; w < shape.topology.edge_count(); ++w) {
    const auto& [tail, head] = shape.topology.edges[w];
    const Vector z = q.segment(tail * d, d) - q.segment(head * d, d);
    r.block(w, tail * d, 1, d) = z.transpose();
    r.block(w, head * d, 1, d) = -z.transpose();
  }
  return r;
}

RigidityReport is_infinitesimally_rigid(const FormationShape& shape,
                                        const StackedConfiguration& q) {
  const Eigen::MatrixXd r = rigidity_matrix(shape, q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& sigma = svd.singularValues();

  RigidityReport report;
  const int n = shape.topology.node_count;
  report.required_rank =
      shape.ambient_dim == 2 ? (2 * n - 3) : (3 * n - 6);
  if (sigma.size() > 0 && sigma[0] > 0.0) {
    const double cutoff = 1e-9 * sigma[0];
    report.rank = static_cast<int>(
        (sigma.array() > cutoff).count());
  }
  report.rigid = report.rank == report.required_rank;
  return report;
}

// ===== Potential and dynamics =====

double formation_potential(const FormationShape& shape,
                           const StackedConfiguration& q) {
  shape.validate();
  check_stacked(shape, q, "q");
  const int d = shape.ambient_dim;
  double v = 0.0;
  for (int w = 0; w < shape.topology.edge_count(); ++w) {
    const auto& [tail, head] = shape.topology.edges[w];
    const double len2 =
        (q.segment(tail * d, d) - q.segment(head * d, d)).squaredNorm();
    const double dw = shape.desired_lengths[static_cast<std::size_t>(w)];
    const double e = len2 - dw * dw;
    v += 0.25 * e * e;
  }
  return v;
}

Vector formation_gradient(const FormationShape& shape,
                          const StackedConfiguration& q) {
  shape.validate();
  check_stacked(shape, q, "q");
  const int d = shape.ambient_dim;
  Vector grad = Vector::Zero(q.size());
  for (int w = 0; w < shape.topology.edge_count(); ++w) {
    const auto& [tail, head] = shape.topology.edges[w];
    const Vector z = q.segment(tail * d, d) - q.segment(head * d, d);
    const double dw = shape.desired_lengths[static_cast<std::size_t>(w)];
    const double e = z.squaredNorm() - dw * dw;
    // d/dq ¼e² contributes e·z at the tail and −e·z at the head.
    grad.segment(tail * d, d) += e * z;
    grad.segment(head * d, d) -= e * z;
  }
  return grad;
}

std::pair<Vector, Vector> closed_loop_rhs(const FormationShape& shape,
                                          const std::vector<double>& gains,
                                          const StackedConfiguration& q,
                                          const Vector& v) {
  shape.validate();
  check_stacked(shape, q, "q");
  check_stacked(shape, v, "v");
  if (gains.size() != static_cast<std::size_t>(shape.topology.node_count)) {
    throw std::invalid_argument("need one gain per node");
  }
  for (double g : gains) {
    if (!(g > 0.0)) {
      throw std::invalid_argument("gains must be positive");
    }
  }
  const int d = shape.ambient_dim;
  Vector acc = -formation_gradient(shape, q);
  for (int i = 0; i < shape.topology.node_count; ++i) {
    acc.segment(i * d, d) -= gains[static_cast<std::size_t>(i)] *
                             v.segment(i * d, d);
  }
  return {v, std::move(acc)};
}

DampedLagrangianModel make_formation_model(const FormationShape& shape,
                                           double kappa) {
  shape.validate();
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("gain must be finite and non-negative");
  }
  DampedLagrangianModel model;
  model.dim = shape.stacked_dim();
  model.damping = kappa;
  model.potential = [shape](const Vector& q) {
    return formation_potential(shape, q);
  };
  model.potential_gradient = [shape](const Vector& q) {
    return formation_gradient(shape, q);
  };
  model.validate();
  return model;
}

DampedLagrangianModel make_formation_model(const FormationShape& shape,
                                           const std::vector<double>& gains) {
  shape.validate();
  if (gains.size() != static_cast<std::size_t>(shape.topology.node_count)) {
    throw std::invalid_argument("need one gain per node");
  }
  for (double g : gains) {
    if (g != gains.front()) {
      throw std::invalid_argument(
          "non-uniform gains do not admit a single exponentially weighted "
          "Lagrangian; use closed_loop_rhs for per-node gains");
    }
  }
  return make_formation_model(shape, gains.front());
}

// ===== Congruence classification =====

double max_agent_speed(int ambient_dim, const Vector& v) {
  if (ambient_dim < 1 || v.size() % ambient_dim != 0) {
    throw std::invalid_argument("velocity size must be a multiple of the "
                                "ambient dimension");
  }
  double worst = 0.0;
  for (Eigen::Index b = 0; b * ambient_dim < v.size(); ++b) {
    worst = std::max(worst, v.segment(b * ambient_dim, ambient_dim).norm());
  }
  return worst;
}

double max_distance_discrepancy(int ambient_dim, const Vector& reference_q,
                                const Vector& q) {
  if (ambient_dim < 1 || reference_q.size() != q.size() ||
      q.size() % ambient_dim != 0) {
    throw std::invalid_argument(
        "configurations must share a size divisible by the ambient "
        "dimension");
  }
  const Eigen::Index n = q.size() / ambient_dim;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double ref = (reference_q.segment(i * ambient_dim, ambient_dim) -
                          reference_q.segment(j * ambient_dim, ambient_dim))
                             .norm();
      const double cur = (q.segment(i * ambient_dim, ambient_dim) -
                          q.segment(j * ambient_dim, ambient_dim))
                             .norm();
      if (ref <= 0.0) {
        throw std::invalid_argument(
            "reference configuration has coincident agents");
      }
      worst = std::max(worst, std::abs(cur - ref) / ref);
    }
  }
  return worst;
}

bool congruence_check(int ambient_dim, const Vector& reference_q,
                      const Vector& q_final, const Vector& v_final,
                      double dist_tol_rel, double vel_tol) {
  if (!(dist_tol_rel > 0.0) || !(vel_tol > 0.0)) {
    throw std::invalid_argument("congruence tolerances must be positive");
  }
  return max_distance_discrepancy(ambient_dim, reference_q, q_final) <=
             dist_tol_rel &&
         max_agent_speed(ambient_dim, v_final) < vel_tol;
}

// ===== Step-size bound =====

double step_size_bound_alpha(const FormationShape& shape, double kappa,
                             double c_ball, double r_ball) {
  shape.validate();
  if (!(kappa > 0.0) || !(c_ball > 0.0) || !(r_ball > 0.0)) {
    throw std::invalid_argument("step-size bound needs positive inputs");
  }
  const double n_nodes = static_cast<double>(shape.topology.node_count);
  const double n_edges = static_cast<double>(shape.topology.edge_count());
  double max_d4 = 0.0;
  for (double d : shape.desired_lengths) {
    max_d4 = std::max(max_d4, d * d * d * d);
  }
  // Field bound over the radius-R ball around size-c initial data: the
  // damping term contributes (1+2|V|κ²)c², the quartic forces contribute
  // 64|E|·R⁶ when edges stretch and 64|E|·R²·max d⁴ when they compress.
  const double r2 = r_ball * r_ball;
  const double force_branch =
      64.0 * n_edges * std::max(r2 * r2 * r2, r2 * max_d4);
  const double m_squared =
      (1.0 + 2.0 * n_nodes * kappa * kappa) * c_ball * c_ball + force_branch;
  return r_ball / (c_ball * std::sqrt(m_squared));
}

// ===== Reference scenario =====

FormationShape reference_formation_shape() {
  FormationShape shape;
  shape.topology.node_count = 4;
  shape.topology.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  shape.ambient_dim = 3;
  const StackedConfiguration target = reference_formation_target();
  shape.desired_lengths.resize(6);
  for (int w = 0; w < 6; ++w) {
    const auto& [tail, head] = shape.topology.edges[static_cast<std::size_t>(w)];
    shape.desired_lengths[static_cast<std::size_t>(w)] =
        (target.segment(tail * 3, 3) - target.segment(head * 3, 3)).norm();
  }
  return shape;
}

StackedConfiguration reference_formation_start() {
  StackedConfiguration q(12);
  q << 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -3.0, 0.0, 1.0, 0.0, -3.0;
  return q;
}

StackedConfiguration reference_formation_target() {
  // The start dilated by 1.35: reachable from the start inside their
  // common plane, with every edge asked to stretch by the same ratio.
  return 1.35 * reference_formation_start();
}

}  // namespace dvi
