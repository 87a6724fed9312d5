// Formation graphs and shapes: incidence/rigidity algebra, the quartic
// edge potential and its gradient, closed-loop dynamics, congruence
// classification, and the step-size bound.

#include "dvi/formation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dvi/noether.hpp"
#include "test_utils.hpp"

using dvi::FormationShape;
using dvi::GraphTopology;
using dvi::StackedConfiguration;
using dvi::Vector;
using dvi_test::random_vector;

namespace {

GraphTopology path_graph(int n) {
  GraphTopology g;
  g.node_count = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

GraphTopology complete_graph(int n) {
  GraphTopology g;
  g.node_count = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

FormationShape make_shape(GraphTopology topology, int dim,
                          std::vector<double> lengths) {
  FormationShape shape;
  shape.topology = std::move(topology);
  shape.ambient_dim = dim;
  shape.desired_lengths = std::move(lengths);
  return shape;
}

// Unit regular tetrahedron stacked into R^12.
StackedConfiguration tetrahedron_configuration() {
  StackedConfiguration q(12);
  q << 0.0, 0.0, 0.0,                                   //
      1.0, 0.0, 0.0,                                    //
      0.5, std::sqrt(3.0) / 2.0, 0.0,                   //
      0.5, std::sqrt(3.0) / 6.0, std::sqrt(2.0 / 3.0);  //
  return q;
}

}  // namespace

// ===== Validation =====

TEST(GraphTopology, ValidationRejectsDegenerateGraphs) {
  GraphTopology g;
  g.node_count = 1;
  g.edges = {{0, 0}};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = path_graph(3);
  g.edges.push_back({1, 1});  // self loop
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = path_graph(3);
  g.edges.push_back({1, 0});  // duplicate of (0,1) up to orientation
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = path_graph(3);
  g.edges.push_back({1, 7});  // out of range
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = path_graph(2);
  g.edges.clear();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  EXPECT_NO_THROW(path_graph(2).validate());
}

TEST(FormationShape, ValidationChecksDimensionAndLengths) {
  auto shape = make_shape(path_graph(2), 2, {1.0});
  EXPECT_NO_THROW(shape.validate());
  shape.ambient_dim = 4;
  EXPECT_THROW(shape.validate(), std::invalid_argument);
  shape.ambient_dim = 2;
  shape.desired_lengths = {1.0, 2.0};
  EXPECT_THROW(shape.validate(), std::invalid_argument);
  shape.desired_lengths = {-1.0};
  EXPECT_THROW(shape.validate(), std::invalid_argument);
}

// ===== Incidence =====

TEST(IncidenceMatrix, SingleEdgeColumn) {
  const Eigen::MatrixXd b = dvi::incidence_matrix(path_graph(2));
  ASSERT_EQ(b.rows(), 2);
  ASSERT_EQ(b.cols(), 1);
  EXPECT_DOUBLE_EQ(b(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b(1, 0), -1.0);
}

TEST(IncidenceMatrix, PathGraphPattern) {
  const Eigen::MatrixXd b = dvi::incidence_matrix(path_graph(3));
  Eigen::MatrixXd expected(3, 2);
  expected << 1, 0, -1, 1, 0, -1;
  EXPECT_EQ(b, expected);
}

TEST(IncidenceMatrix, CompleteGraphSums) {
  const Eigen::MatrixXd b = dvi::incidence_matrix(complete_graph(4));
  ASSERT_EQ(b.rows(), 4);
  ASSERT_EQ(b.cols(), 6);
  // Each column has one +1 and one −1, so all column sums vanish; node i
  // is tail of the 3−i later nodes and head of the i earlier ones.
  EXPECT_LE(b.colwise().sum().cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd row_sums = b.rowwise().sum();
  EXPECT_DOUBLE_EQ(row_sums[0], 3.0);
  EXPECT_DOUBLE_EQ(row_sums[1], 1.0);
  EXPECT_DOUBLE_EQ(row_sums[2], -1.0);
  EXPECT_DOUBLE_EQ(row_sums[3], -3.0);
}

// ===== Relative positions and distance errors =====

TEST(RelativePositions, SingleEdgeDifference) {
  const auto shape = make_shape(path_graph(2), 2, {1.0});
  StackedConfiguration q(4);
  q << 0.0, 0.0, 1.0, 0.0;
  const Vector z = dvi::relative_positions(shape, q);
  ASSERT_EQ(z.size(), 2);
  EXPECT_DOUBLE_EQ(z[0], -1.0);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
}

TEST(RelativePositions, TranslationInvariantAndBlockwise) {
  std::mt19937_64 rng(7);
  const auto shape = make_shape(complete_graph(4), 3,
                                std::vector<double>(6, 1.0));
  const StackedConfiguration q = random_vector(rng, 12, -2.0, 2.0);
  const Vector z = dvi::relative_positions(shape, q);
  ASSERT_EQ(z.size(), 18);
  for (int w = 0; w < 6; ++w) {
    const auto [tail, head] = shape.topology.edges[w];
    const Vector expected =
        q.segment(3 * tail, 3) - q.segment(3 * head, 3);
    EXPECT_LE((z.segment(3 * w, 3) - expected).norm(), 0.0);
  }
  StackedConfiguration shifted = q;
  for (int a = 0; a < 4; ++a) shifted.segment(3 * a, 3).array() += 5.0;
  EXPECT_LE((dvi::relative_positions(shape, shifted) - z).norm(), 1e-12);
}

TEST(DistanceErrors, ZeroOnTheDesiredShapeAndUnitWhenStretched) {
  const auto shape = dvi::reference_formation_shape();
  const Vector on_target =
      dvi::distance_errors(shape, dvi::reference_formation_target());
  EXPECT_LE(on_target.cwiseAbs().maxCoeff(), 1e-12);

  const auto pair_shape = make_shape(path_graph(2), 2, {1.0});
  StackedConfiguration q(4);
  q << 0.0, 0.0, 1.0, 1.0;  // separation √2 against desired length 1
  const Vector e = dvi::distance_errors(pair_shape, q);
  ASSERT_EQ(e.size(), 1);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
}

TEST(DistanceErrors, InvariantUnderRigidMotion) {
  const auto shape = dvi::reference_formation_shape();
  const StackedConfiguration q = dvi::reference_formation_start();
  Vector axis(3);
  axis << 0.2, -0.5, 0.84;
  const auto rot = dvi::rotation_generator_axis(axis);
  Vector dir(3);
  dir << 1.0, -2.0, 0.5;
  const auto trans = dvi::translation_generator(3, dir);
  const StackedConfiguration moved = trans.apply(rot.apply(q, 0.9), 1.0);
  EXPECT_LE((dvi::distance_errors(shape, moved) -
             dvi::distance_errors(shape, q))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

// ===== Rigidity matrix and rank =====

TEST(RigidityMatrix, SingleEdgeRow) {
  const auto shape = make_shape(path_graph(2), 2, {1.0});
  StackedConfiguration q(4);
  q << 1.0, 0.0, 0.0, 0.0;
  const Eigen::MatrixXd r = dvi::rigidity_matrix(shape, q);
  ASSERT_EQ(r.rows(), 1);
  ASSERT_EQ(r.cols(), 4);
  EXPECT_DOUBLE_EQ(r(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(r(0, 2), -1.0);
  EXPECT_DOUBLE_EQ(r(0, 3), 0.0);
}

TEST(RigidityMatrix, HalfJacobianOfSquaredDistances) {
  std::mt19937_64 rng(19);
  const auto shape = make_shape(complete_graph(4), 3,
                                std::vector<double>(6, 1.0));
  const StackedConfiguration q = random_vector(rng, 12, -2.0, 2.0);
  const Eigen::MatrixXd r = dvi::rigidity_matrix(shape, q);
  const double fd = 1e-6;
  for (int j = 0; j < 12; ++j) {
    StackedConfiguration plus = q, minus = q;
    plus[j] += fd;
    minus[j] -= fd;
    const Vector z_plus = dvi::relative_positions(shape, plus);
    const Vector z_minus = dvi::relative_positions(shape, minus);
    for (int w = 0; w < 6; ++w) {
      const double slope = (z_plus.segment(3 * w, 3).squaredNorm() -
                            z_minus.segment(3 * w, 3).squaredNorm()) /
                           (2.0 * fd);
      EXPECT_NEAR(r(w, j), 0.5 * slope, 1e-6);
    }
  }
}

TEST(RigidityMatrix, RigidMotionFieldsLieInTheNullSpace) {
  const auto shape = make_shape(complete_graph(4), 3,
                                std::vector<double>(6, 1.0));
  const StackedConfiguration q = tetrahedron_configuration();
  const Eigen::MatrixXd r = dvi::rigidity_matrix(shape, q);
  for (const auto& gen : dvi::euclidean_generators(3)) {
    EXPECT_LE((r * gen.field(q)).cwiseAbs().maxCoeff(), 1e-12) << gen.label;
  }
}

TEST(RigidityRank, TetrahedronIsRigidInSpace) {
  const auto shape = make_shape(complete_graph(4), 3,
                                std::vector<double>(6, 1.0));
  const auto report =
      dvi::is_infinitesimally_rigid(shape, tetrahedron_configuration());
  EXPECT_EQ(report.rank, 6);
  EXPECT_EQ(report.required_rank, 6);
  EXPECT_TRUE(report.rigid);
}

TEST(RigidityRank, SquarePerimeterShears) {
  GraphTopology g;
  g.node_count = 4;
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const auto shape = make_shape(g, 2, std::vector<double>(4, 1.0));
  StackedConfiguration q(8);
  q << 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0;
  const auto report = dvi::is_infinitesimally_rigid(shape, q);
  EXPECT_EQ(report.rank, 4);
  EXPECT_EQ(report.required_rank, 5);
  EXPECT_FALSE(report.rigid);
}

TEST(RigidityRank, CollinearTriangleDegenerates) {
  const auto shape = make_shape(complete_graph(3), 2,
                                std::vector<double>(3, 1.0));
  StackedConfiguration q(6);
  q << 0.0, 0.0, 1.0, 0.0, 2.0, 0.0;
  const auto report = dvi::is_infinitesimally_rigid(shape, q);
  EXPECT_EQ(report.rank, 2);
  EXPECT_EQ(report.required_rank, 3);
  EXPECT_FALSE(report.rigid);
}

TEST(RigidityRank, ReferenceTargetHasThePlanarFlex) {
  // The reference target is coplanar, so a tetrahedral edge set in space
  // still leaves the out-of-plane bending flex: rank 5 of required 6.
  const auto shape = dvi::reference_formation_shape();
  const auto report = dvi::is_infinitesimally_rigid(
      shape, dvi::reference_formation_target());
  EXPECT_EQ(report.rank, 5);
  EXPECT_EQ(report.required_rank, 6);
  EXPECT_FALSE(report.rigid);
}

// ===== Potential and gradient =====

TEST(FormationPotential, ZeroExactlyOnTheTarget) {
  const auto shape = dvi::reference_formation_shape();
  const StackedConfiguration target = dvi::reference_formation_target();
  EXPECT_LE(dvi::formation_potential(shape, target), 1e-24);
  EXPECT_LE(dvi::formation_gradient(shape, target).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(FormationPotential, SingleStretchedEdgeQuarter) {
  const auto shape = make_shape(path_graph(2), 2, {1.0});
  StackedConfiguration q(4);
  q << 0.0, 0.0, 1.0, 1.0;
  EXPECT_DOUBLE_EQ(dvi::formation_potential(shape, q), 0.25);
}

TEST(FormationPotential, ReferenceStartValue) {
  // Every edge error at the start is −0.8225·ℓ² for the start length ℓ
  // (the target dilates by 1.35), so V = ¼·0.8225²·Σℓ⁴ = ¼·0.8225²·920.
  const auto shape = dvi::reference_formation_shape();
  const double v =
      dvi::formation_potential(shape, dvi::reference_formation_start());
  EXPECT_NEAR(v, 155.5964375, 155.5964375 * 1e-12);
}

TEST(FormationGradient, EqualsRigidityTransposeTimesErrors) {
  std::mt19937_64 rng(41);
  const auto shape = dvi::reference_formation_shape();
  for (int trial = 0; trial < 5; ++trial) {
    const StackedConfiguration q = random_vector(rng, 12, -3.0, 3.0);
    const Vector grad = dvi::formation_gradient(shape, q);
    const Vector assembled = dvi::rigidity_matrix(shape, q).transpose() *
                             dvi::distance_errors(shape, q);
    EXPECT_LE((grad - assembled).norm() / (1.0 + assembled.norm()), 1e-12);
  }
}

TEST(FormationGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(43);
  const auto shape = dvi::reference_formation_shape();
  const StackedConfiguration q = random_vector(rng, 12, -2.0, 2.0);
  const Vector grad = dvi::formation_gradient(shape, q);
  const double fd = 1e-5;
  for (int j = 0; j < 12; ++j) {
    StackedConfiguration plus = q, minus = q;
    plus[j] += fd;
    minus[j] -= fd;
    const double slope = (dvi::formation_potential(shape, plus) -
                          dvi::formation_potential(shape, minus)) /
                         (2.0 * fd);
    EXPECT_NEAR(grad[j], slope, 1e-5 * std::max(1.0, std::abs(slope)));
  }
}

TEST(FormationGradient, EquivariantUnderRigidMotion) {
  std::mt19937_64 rng(47);
  const auto shape = dvi::reference_formation_shape();
  const StackedConfiguration q = random_vector(rng, 12, -2.0, 2.0);
  Vector axis(3);
  axis << -0.3, 0.1, 0.6;
  const auto rot = dvi::rotation_generator_axis(axis);
  Vector dir(3);
  dir << 0.4, 1.0, -0.9;
  const auto trans = dvi::translation_generator(3, dir);

  const StackedConfiguration moved = rot.apply(trans.apply(q, 1.3), 0.7);
  EXPECT_NEAR(dvi::formation_potential(shape, moved),
              dvi::formation_potential(shape, q),
              1e-9 * std::max(1.0, dvi::formation_potential(shape, q)));
  // The gradient rotates with the frame and ignores the translation.
  const Vector expected = rot.apply(dvi::formation_gradient(shape, q), 0.7);
  EXPECT_LE((dvi::formation_gradient(shape, moved) - expected).norm() /
                (1.0 + expected.norm()),
            1e-9);
}

// ===== Closed-loop dynamics =====

TEST(ClosedLoop, TargetAtRestIsAnEquilibrium) {
  const auto shape = dvi::reference_formation_shape();
  const std::vector<double> gains(4, 13.0);
  const auto [qdot, vdot] = dvi::closed_loop_rhs(
      shape, gains, dvi::reference_formation_target(), Vector::Zero(12));
  EXPECT_LE(qdot.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(vdot.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ClosedLoop, PureDampingAtTheTargetWithPerNodeGains) {
  std::mt19937_64 rng(53);
  const auto shape = dvi::reference_formation_shape();
  const std::vector<double> gains = {1.0, 2.0, 3.0, 4.0};
  const Vector v = random_vector(rng, 12, -1.0, 1.0);
  const auto [qdot, vdot] = dvi::closed_loop_rhs(
      shape, gains, dvi::reference_formation_target(), v);
  EXPECT_LE((qdot - v).norm(), 1e-12);
  for (int a = 0; a < 4; ++a) {
    EXPECT_LE((vdot.segment(3 * a, 3) + gains[a] * v.segment(3 * a, 3))
                  .norm(),
              1e-12)
        << "agent " << a;
  }
}

TEST(ClosedLoop, OneStepDefectShrinksAtFourthOrder) {
  // Seed the two-point update with exact flow samples and compare one
  // step against a fine reference integration.  The update is a weighted
  // central-difference scheme, so with both seeds on the exact flow the
  // odd error term cancels and halving the step shrinks the one-step
  // defect by roughly 2⁴ (slightly less at finite step).
  const auto shape = dvi::reference_formation_shape();
  const double kappa = 13.0;
  const std::vector<double> gains(4, kappa);
  const StackedConfiguration q0 = dvi::reference_formation_start();
  const Vector v0 = Vector::Zero(12);

  auto rk4_flow = [&](double t_final, double dt) {
    Vector q = q0, v = v0;
    const int n = static_cast<int>(std::llround(t_final / dt));
    for (int i = 0; i < n; ++i) {
      const auto [k1q, k1v] = dvi::closed_loop_rhs(shape, gains, q, v);
      const auto [k2q, k2v] = dvi::closed_loop_rhs(
          shape, gains, q + 0.5 * dt * k1q, v + 0.5 * dt * k1v);
      const auto [k3q, k3v] = dvi::closed_loop_rhs(
          shape, gains, q + 0.5 * dt * k2q, v + 0.5 * dt * k2v);
      const auto [k4q, k4v] = dvi::closed_loop_rhs(
          shape, gains, q + dt * k3q, v + dt * k3v);
      q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return q;
  };
  const auto model = dvi::make_formation_model(shape, kappa);
  auto one_step_defect = [&](double h) {
    const Vector q_h = rk4_flow(h, h / 100.0);
    const Vector q_2h = rk4_flow(2.0 * h, h / 100.0);
    return (dvi::explicit_step(model, 0, h, q0, q_h) - q_2h).norm();
  };
  const double coarse = one_step_defect(0.01);
  const double fine = one_step_defect(0.005);
  ASSERT_GT(fine, 0.0);
  const double ratio = coarse / fine;
  EXPECT_GE(ratio, 13.0);
  EXPECT_LE(ratio, 16.5);
}

TEST(FormationModel, UniformGainVectorMatchesScalarGain) {
  const auto shape = dvi::reference_formation_shape();
  const auto scalar_model = dvi::make_formation_model(shape, 13.0);
  const auto vector_model =
      dvi::make_formation_model(shape, std::vector<double>(4, 13.0));
  EXPECT_EQ(scalar_model.dim, 12);
  EXPECT_DOUBLE_EQ(vector_model.damping, scalar_model.damping);
  std::mt19937_64 rng(59);
  const Vector q = random_vector(rng, 12, -2.0, 2.0);
  EXPECT_DOUBLE_EQ(vector_model.potential(q), scalar_model.potential(q));
}

TEST(FormationModel, NonUniformGainsAreRejected) {
  const auto shape = dvi::reference_formation_shape();
  EXPECT_THROW(
      dvi::make_formation_model(shape, std::vector<double>{1, 2, 3, 4}),
      std::invalid_argument);
  EXPECT_THROW(dvi::make_formation_model(shape, std::vector<double>(3, 2.0)),
               std::invalid_argument);
}

// ===== Congruence classification =====

TEST(Congruence, SpeedHelpersPickTheWorstAgent) {
  Vector v(6);
  v << 3.0, 4.0, 0.0, 0.0, 0.0, 1.0;
  EXPECT_DOUBLE_EQ(dvi::max_agent_speed(3, v), 5.0);
}

TEST(Congruence, CoincidentReferenceAgentsAreRejected) {
  Vector ref(4), q(4);
  ref << 0.0, 0.0, 0.0, 0.0;
  q << 0.0, 0.0, 1.0, 0.0;
  EXPECT_THROW(dvi::max_distance_discrepancy(2, ref, q),
               std::invalid_argument);
}

TEST(Congruence, AcceptsARigidlyMovedCopy) {
  const StackedConfiguration target = dvi::reference_formation_target();
  Vector axis(3);
  axis << 0.1, 0.9, -0.4;
  Vector dir(3);
  dir << -2.0, 0.3, 1.1;
  const StackedConfiguration moved = dvi::translation_generator(3, dir)
                                         .apply(dvi::rotation_generator_axis(
                                                    axis)
                                                    .apply(target, 1.1),
                                                1.0);
  EXPECT_NEAR(dvi::max_distance_discrepancy(3, target, moved), 0.0, 1e-12);
  EXPECT_TRUE(dvi::congruence_check(3, target, moved, Vector::Zero(12)));
}

TEST(Congruence, RejectsResidualMotion) {
  const StackedConfiguration target = dvi::reference_formation_target();
  Vector v = Vector::Zero(12);
  v[0] = 0.2;  // one agent still moving faster than the speed gate
  EXPECT_FALSE(dvi::congruence_check(3, target, target, v));
  EXPECT_TRUE(dvi::congruence_check(3, target, target, Vector::Zero(12)));
}

TEST(Congruence, RejectsAReflectedShapeThatMatchesAllEdges) {
  // Bowtie counterexample: flipping one node across the (0,1) axis keeps
  // every graph edge length but changes a non-edge pair distance, so the
  // edge-error vector vanishes while the shapes are not congruent.
  GraphTopology g;
  g.node_count = 4;
  g.edges = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}};
  StackedConfiguration base(8);
  base << 0.0, 0.0, 2.0, 0.0, 1.0, 1.0, 1.0, -2.0;
  StackedConfiguration flipped = base;
  flipped[7] = 2.0;  // reflect node 3 upward

  std::vector<double> lengths;
  for (auto [tail, head] : g.edges) {
    lengths.push_back(
        (base.segment(2 * tail, 2) - base.segment(2 * head, 2)).norm());
  }
  const auto shape = make_shape(g, 2, lengths);
  EXPECT_LE(dvi::distance_errors(shape, flipped).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_GT(dvi::max_distance_discrepancy(2, base, flipped), 0.5);
  EXPECT_FALSE(dvi::congruence_check(2, base, flipped, Vector::Zero(8)));
}

// ===== Step-size bound =====

TEST(StepSizeBound, TriangularPrismOracle) {
  // Six agents, nine unit edges, κ = 13, unit ball data:
  // M² = (1 + 2·6·13²)·1 + 64·9·1 = 2605, α = 1/√2605.
  GraphTopology g;
  g.node_count = 6;
  g.edges = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5},
             {5, 3}, {0, 3}, {1, 4}, {2, 5}};
  const auto shape = make_shape(g, 3, std::vector<double>(9, 1.0));
  EXPECT_NEAR(dvi::step_size_bound_alpha(shape, 13.0, 1.0, 1.0),
              0.019592783347677303, 0.019592783347677303 * 1e-14);
}

TEST(StepSizeBound, ShrinksWithGainEdgesAndRadius) {
  GraphTopology g;
  g.node_count = 3;
  g.edges = {{0, 1}, {1, 2}};
  const auto two_edges = make_shape(g, 2, {1.0, 1.0});
  g.edges.push_back({0, 2});
  const auto three_edges = make_shape(g, 2, {1.0, 1.0, 1.0});

  const double base = dvi::step_size_bound_alpha(two_edges, 5.0, 1.0, 1.0);
  EXPECT_LT(dvi::step_size_bound_alpha(two_edges, 10.0, 1.0, 1.0), base);
  EXPECT_LT(dvi::step_size_bound_alpha(three_edges, 5.0, 1.0, 1.0), base);
  EXPECT_LT(dvi::step_size_bound_alpha(two_edges, 5.0, 2.0, 1.0), base);
  // Growing the ball radius raises the numerator linearly but M like the
  // cube of the radius, so the bound still shrinks overall.
  EXPECT_LT(dvi::step_size_bound_alpha(two_edges, 5.0, 1.0, 3.0), base);
  EXPECT_THROW(dvi::step_size_bound_alpha(two_edges, 0.0, 1.0, 1.0),
               std::invalid_argument);
  EXPECT_THROW(dvi::step_size_bound_alpha(two_edges, 5.0, -1.0, 1.0),
               std::invalid_argument);
  EXPECT_THROW(dvi::step_size_bound_alpha(two_edges, 5.0, 1.0, 0.0),
               std::invalid_argument);
}

// ===== Reference scenario =====

TEST(ReferenceScenario, StartGeometryAndTargetScale) {
  const auto shape = dvi::reference_formation_shape();
  EXPECT_EQ(shape.topology.node_count, 4);
  EXPECT_EQ(shape.topology.edge_count(), 6);
  EXPECT_EQ(shape.ambient_dim, 3);
  const StackedConfiguration start = dvi::reference_formation_start();
  const StackedConfiguration target = dvi::reference_formation_target();
  ASSERT_EQ(start.size(), 12);
  EXPECT_LE((target - 1.35 * start).cwiseAbs().maxCoeff(), 0.0);
  // Desired lengths are exactly the target's edge lengths.
  for (int w = 0; w < 6; ++w) {
    const auto [tail, head] = shape.topology.edges[w];
    EXPECT_DOUBLE_EQ(
        shape.desired_lengths[w],
        (target.segment(3 * tail, 3) - target.segment(3 * head, 3)).norm());
  }
  // All four starting agents lie in the plane 3x − y = 3.
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(3.0 * start[3 * a] - start[3 * a + 1], 3.0, 1e-12);
  }
}

