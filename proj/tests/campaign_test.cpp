// Sweep campaigns: plan finalization, deterministic sampling, outcome
// classification, CSV artifacts, and the SVG heatmap.

#include "dvi/campaign.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "test_utils.hpp"

using dvi::IntegratorConfig;
using dvi::SamplingMode;
using dvi::SweepOutcome;
using dvi::SweepPlan;
using dvi::Trajectory;
using dvi::Vector;

namespace {

// Reference four-agent plan with the displaced agent sampled in a small
// box around its desired position.
SweepPlan reference_plan(double radius) {
  SweepPlan plan;
  plan.shape = dvi::reference_formation_shape();
  plan.base_configuration = dvi::reference_formation_target();
  plan.displaced_agent = 1;
  const Vector center = plan.base_configuration.segment(3, 3);
  plan.region.min = center - Vector::Constant(3, radius);
  plan.region.max = center + Vector::Constant(3, radius);
  plan.kappa = 13.0;
  return plan;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

void expect_same_outcomes(const std::vector<SweepOutcome>& a,
                          const std::vector<SweepOutcome>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].initial_displaced, b[i].initial_displaced) << i;
    EXPECT_EQ(a[i].converged, b[i].converged) << i;
    EXPECT_EQ(a[i].diverged, b[i].diverged) << i;
    EXPECT_EQ(a[i].steps_to_converge, b[i].steps_to_converge) << i;
    EXPECT_EQ(a[i].final_discrepancy, b[i].final_discrepancy) << i;
    EXPECT_EQ(a[i].final_max_speed, b[i].final_max_speed) << i;
  }
}

}  // namespace

// ===== Plan finalization =====

TEST(SweepPlanFinalize, DerivesStepAndStepsFromTheHorizon) {
  SweepPlan plan = reference_plan(0.1);
  plan.sampling = SamplingMode::uniform_random;
  plan.sample_count = 1;
  plan.finalize();
  const double alpha =
      dvi::step_size_bound_alpha(plan.shape, plan.kappa, 1.0, 1.0);
  ASSERT_LT(alpha, 0.014);  // the bound is the binding default here
  EXPECT_DOUBLE_EQ(plan.h, alpha);
  EXPECT_NEAR(plan.h, 0.0014715536505786858, 1e-12);
  EXPECT_EQ(plan.steps,
            static_cast<long long>(std::ceil(5.0 / plan.h - 1e-12)));
  EXPECT_DOUBLE_EQ(plan.horizon, plan.h * static_cast<double>(plan.steps));
  // Finalizing again must not change anything.
  const double h = plan.h;
  const long long steps = plan.steps;
  plan.finalize();
  EXPECT_EQ(plan.h, h);
  EXPECT_EQ(plan.steps, steps);
}

TEST(SweepPlanFinalize, EnforcesTheStepBoundOnRequest) {
  SweepPlan plan = reference_plan(0.1);
  plan.sampling = SamplingMode::uniform_random;
  plan.sample_count = 1;
  plan.h = 0.02;
  plan.enforce_alpha = true;
  EXPECT_THROW(plan.finalize(), std::invalid_argument);
  plan.enforce_alpha = false;
  EXPECT_NO_THROW(plan.finalize());
}

TEST(SweepPlanFinalize, RejectsInconsistentSettings) {
  {
    SweepPlan plan = reference_plan(0.1);
    plan.sampling = SamplingMode::grid;
    plan.grid_counts = {2, 2};  // one count missing for a 3D region
    EXPECT_THROW(plan.finalize(), std::invalid_argument);
  }
  {
    SweepPlan plan = reference_plan(0.1);
    plan.sample_count = 0;
    EXPECT_THROW(plan.finalize(), std::invalid_argument);
  }
  {
    SweepPlan plan = reference_plan(0.1);
    plan.sample_count = 4;
    plan.kappa = 0.0;
    EXPECT_THROW(plan.finalize(), std::invalid_argument);
  }
  {
    SweepPlan plan = reference_plan(0.1);
    plan.sample_count = 4;
    plan.displaced_agent = 9;
    EXPECT_THROW(plan.finalize(), std::invalid_argument);
  }
  {
    SweepPlan plan = reference_plan(0.1);
    plan.sample_count = 4;
    std::swap(plan.region.min, plan.region.max);
    EXPECT_THROW(plan.finalize(), std::invalid_argument);
  }
}

// ===== Campaign execution =====

TEST(RunCampaign, DegenerateGridSampleAtTheTargetConverges) {
  SweepPlan plan = reference_plan(0.0);
  plan.sampling = SamplingMode::grid;
  plan.grid_counts = {1, 1, 1};
  plan.h = 0.01;
  plan.steps = 200;
  const auto outcomes = dvi::run_campaign(plan, 1);
  ASSERT_EQ(outcomes.size(), 1u);
  const SweepOutcome& o = outcomes[0];
  EXPECT_EQ(o.initial_displaced,
            dvi::reference_formation_target().segment(3, 3));
  EXPECT_TRUE(o.converged);
  EXPECT_FALSE(o.diverged);
  EXPECT_EQ(o.steps_to_converge, 0);
  EXPECT_LE(o.final_discrepancy, 1e-12);
  EXPECT_LE(o.final_max_speed, 1e-12);
}

TEST(RunCampaign, GridMidpointAndOrderingConventions) {
  SweepPlan plan = reference_plan(0.01);
  plan.sampling = SamplingMode::grid;
  plan.grid_counts = {2, 1, 2};
  plan.h = 0.01;
  plan.steps = 100;
  const auto outcomes = dvi::run_campaign(plan, 1);
  ASSERT_EQ(outcomes.size(), 4u);
  const Vector center = plan.base_configuration.segment(3, 3);
  // Last axis fastest: (x−, z−), (x−, z+), (x+, z−), (x+, z+); the
  // single-count middle axis sits at the box midpoint.
  EXPECT_DOUBLE_EQ(outcomes[0].initial_displaced[0], center[0] - 0.01);
  EXPECT_DOUBLE_EQ(outcomes[0].initial_displaced[2], center[2] - 0.01);
  EXPECT_DOUBLE_EQ(outcomes[1].initial_displaced[0], center[0] - 0.01);
  EXPECT_DOUBLE_EQ(outcomes[1].initial_displaced[2], center[2] + 0.01);
  EXPECT_DOUBLE_EQ(outcomes[2].initial_displaced[0], center[0] + 0.01);
  EXPECT_DOUBLE_EQ(outcomes[3].initial_displaced[0], center[0] + 0.01);
  for (const auto& o : outcomes)
    EXPECT_DOUBLE_EQ(o.initial_displaced[1], center[1]);
}

TEST(RunCampaign, FarSampleDoesNotConverge) {
  SweepPlan plan = reference_plan(0.0);
  plan.sampling = SamplingMode::grid;
  plan.grid_counts = {1, 1, 1};
  plan.region.min = Vector::Constant(3, 1.0e3);
  plan.region.max = Vector::Constant(3, 1.0e3);
  plan.h = 0.01;
  plan.steps = 500;
  const auto outcomes = dvi::run_campaign(plan, 1);
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_FALSE(outcomes[0].converged);
}

TEST(RunCampaign, RandomSamplingIsDeterministicGivenTheSeed) {
  SweepPlan plan = reference_plan(0.05);
  plan.sampling = SamplingMode::uniform_random;
  plan.sample_count = 12;
  plan.seed = 777;
  plan.h = 0.01;
  plan.steps = 150;
  const auto first = dvi::run_campaign(plan, 1);
  const auto second = dvi::run_campaign(plan, 1);
  expect_same_outcomes(first, second);
  for (const auto& o : first) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_GE(o.initial_displaced[a], plan.region.min[a]);
      EXPECT_LE(o.initial_displaced[a], plan.region.max[a]);
    }
  }
}

TEST(RunCampaign, DegenerateAxisTakesItsBoundWithoutADraw) {
  SweepPlan plan = reference_plan(0.05);
  plan.sampling = SamplingMode::uniform_random;
  plan.sample_count = 6;
  plan.seed = 4242;
  plan.h = 0.01;
  plan.steps = 100;
  const auto full = dvi::run_campaign(plan, 1);

  SweepPlan sliced = plan;
  sliced.region.min[1] = sliced.region.max[1];  // collapse the y axis
  const auto slice = dvi::run_campaign(sliced, 1);
  ASSERT_EQ(full.size(), slice.size());
  // Within the first sample the x draw precedes y, so it must coincide
  // with the full run's; the collapsed axis itself never draws.
  EXPECT_EQ(slice[0].initial_displaced[0], full[0].initial_displaced[0]);
  for (std::size_t i = 0; i < slice.size(); ++i) {
    EXPECT_EQ(slice[i].initial_displaced[1], sliced.region.min[1]) << i;
    EXPECT_GE(slice[i].initial_displaced[0], sliced.region.min[0]);
    EXPECT_LE(slice[i].initial_displaced[0], sliced.region.max[0]);
    EXPECT_GE(slice[i].initial_displaced[2], sliced.region.min[2]);
    EXPECT_LE(slice[i].initial_displaced[2], sliced.region.max[2]);
  }
}

TEST(RunCampaign, WorkerCountCannotChangeOutcomes) {
  SweepPlan plan = reference_plan(0.08);
  plan.sampling = SamplingMode::uniform_random;
  plan.sample_count = 20;
  plan.seed = 99;
  plan.h = 0.01;
  plan.steps = 120;
  const auto serial = dvi::run_campaign(plan, 1);
  const auto parallel = dvi::run_campaign(plan, 3);
  expect_same_outcomes(serial, parallel);
}

// ===== Classification =====

TEST(ClassifyOutcome, RestOnTheTargetConvergesImmediately) {
  const auto shape = dvi::reference_formation_shape();
  const auto model = dvi::make_formation_model(shape, 13.0);
  IntegratorConfig config;
  config.step = 0.01;
  config.steps = 50;
  config.initial_position = dvi::reference_formation_target();
  config.initial_velocity = Vector::Zero(12);
  const Trajectory traj = dvi::integrate(model, config);
  const SweepOutcome o = dvi::classify_outcome(
      shape, dvi::reference_formation_target(), traj);
  EXPECT_TRUE(o.converged);
  EXPECT_FALSE(o.diverged);
  EXPECT_EQ(o.steps_to_converge, 0);
  EXPECT_LE(o.final_discrepancy, 1e-12);
  EXPECT_LE(o.final_max_speed, 1e-12);
}

TEST(ClassifyOutcome, PerturbedStartConvergesAfterATransient) {
  const auto shape = dvi::reference_formation_shape();
  const auto model = dvi::make_formation_model(shape, 13.0);
  IntegratorConfig config;
  config.step = 0.005;
  config.steps = 600;
  config.initial_position = dvi::reference_formation_target();
  // Push agent 0 along the (0,1) edge direction so the shortest pair
  // distance breaks the 1% gate at the start.
  config.initial_position[2] += 0.05;
  config.initial_velocity = Vector::Zero(12);
  const Trajectory traj = dvi::integrate(model, config);
  ASSERT_FALSE(traj.diverged());
  const SweepOutcome o = dvi::classify_outcome(
      shape, dvi::reference_formation_target(), traj);
  EXPECT_TRUE(o.converged);
  EXPECT_GT(o.steps_to_converge, 0);
  EXPECT_LT(o.steps_to_converge, 600);
  EXPECT_LE(o.final_discrepancy, 0.01);
  EXPECT_LT(o.final_max_speed, 0.1);
}

TEST(ClassifyOutcome, DistantStationaryShapeIsRejectedOnDistanceAlone) {
  const auto shape = dvi::reference_formation_shape();
  Trajectory traj;
  traj.step = 0.01;
  const Vector dilated = 2.0 * dvi::reference_formation_target();
  for (int i = 0; i < 3; ++i) {
    dvi::PhasePoint point;
    point.index = i;
    point.time = 0.01 * i;
    point.q = dilated;
    point.p = Vector::Zero(12);
    traj.points.push_back(point);
  }
  const SweepOutcome o = dvi::classify_outcome(
      shape, dvi::reference_formation_target(), traj);
  EXPECT_FALSE(o.converged);
  EXPECT_FALSE(o.diverged);
  EXPECT_EQ(o.steps_to_converge, -1);
  EXPECT_NEAR(o.final_discrepancy, 1.0, 1e-12);
  EXPECT_EQ(o.final_max_speed, 0.0);
}

TEST(ClassifyOutcome, GuardTripMarksDivergence) {
  const auto shape = dvi::reference_formation_shape();
  const auto model = dvi::make_formation_model(shape, 13.0);
  IntegratorConfig config;
  config.step = 0.5;  // far too coarse for this stiffness
  config.steps = 400;
  config.initial_position = 50.0 * dvi::reference_formation_target();
  config.initial_velocity = Vector::Zero(12);
  const Trajectory traj = dvi::integrate(model, config);
  ASSERT_TRUE(traj.diverged());
  const SweepOutcome o = dvi::classify_outcome(
      shape, dvi::reference_formation_target(), traj);
  EXPECT_TRUE(o.diverged);
  EXPECT_FALSE(o.converged);
  EXPECT_EQ(o.steps_to_converge, -1);
}

// ===== CSV artifact =====

TEST(SweepCsv, HeaderRowsAndRoundTrip) {
  SweepPlan plan = reference_plan(0.01);
  plan.sampling = SamplingMode::grid;
  plan.grid_counts = {3, 3, 1};
  plan.h = 0.01;
  plan.steps = 300;
  const auto outcomes = dvi::run_campaign(plan, 1);
  ASSERT_EQ(outcomes.size(), 9u);

  const std::string path = testing::TempDir() + "sweep_test.csv";
  dvi::write_sweep_csv(outcomes, plan, path);
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line,
            "sample_index,x0,y0,z0,converged,diverged,steps_to_converge,"
            "final_discrepancy,final_max_speed");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string field;
    ASSERT_TRUE(std::getline(fields, field, ','));
    EXPECT_EQ(std::stoi(field), rows);
    // The three coordinates must reread bit-exactly from their 17
    // significant digits.
    for (int a = 0; a < 3; ++a) {
      ASSERT_TRUE(std::getline(fields, field, ','));
      EXPECT_EQ(std::strtod(field.c_str(), nullptr),
                outcomes[static_cast<std::size_t>(rows)].initial_displaced[a]);
    }
    ASSERT_TRUE(std::getline(fields, field, ','));
    EXPECT_EQ(std::stoi(field),
              outcomes[static_cast<std::size_t>(rows)].converged ? 1 : 0);
    ++rows;
  }
  EXPECT_EQ(rows, 9);
}

TEST(SweepCsv, IdenticalRunsProduceIdenticalBytes) {
  SweepPlan plan = reference_plan(0.04);
  plan.sampling = SamplingMode::uniform_random;
  plan.sample_count = 8;
  plan.seed = 2024;
  plan.h = 0.01;
  plan.steps = 100;
  const std::string path_a = testing::TempDir() + "sweep_a.csv";
  const std::string path_b = testing::TempDir() + "sweep_b.csv";
  dvi::write_sweep_csv(dvi::run_campaign(plan, 1), plan, path_a);
  dvi::write_sweep_csv(dvi::run_campaign(plan, 2), plan, path_b);
  EXPECT_EQ(read_file(path_a), read_file(path_b));
}

TEST(SweepCsv, UnwritablePathThrows) {
  SweepPlan plan = reference_plan(0.01);
  EXPECT_THROW(
      dvi::write_sweep_csv({}, plan, "/nonexistent_dir_zz/out.csv"),
      std::runtime_error);
}

// ===== Heatmap artifact =====

TEST(Heatmap, EmptyOutcomesStillProduceAxesAndLegend) {
  SweepPlan plan = reference_plan(0.05);
  plan.region.min[2] = plan.region.max[2];  // fix z: a 2D slice remains
  const std::string path = testing::TempDir() + "empty_heatmap.svg";
  dvi::emit_heatmap({}, plan, path);
  const std::string svg = read_file(path);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("converged"), std::string::npos);
  EXPECT_NE(svg.find("not converged"), std::string::npos);
  EXPECT_NE(svg.find("diverged"), std::string::npos);
  EXPECT_NE(svg.find("desired position"), std::string::npos);
  EXPECT_NE(svg.find("displacement"), std::string::npos);
}

TEST(Heatmap, ConvergedBallRendersGreenMarkers) {
  SweepPlan plan = reference_plan(0.01);
  plan.region.min[2] = plan.base_configuration[5];  // fix z at the target
  plan.region.max[2] = plan.base_configuration[5];
  plan.sampling = SamplingMode::grid;
  plan.grid_counts = {3, 3, 1};
  plan.h = 0.01;
  plan.steps = 300;
  const auto outcomes = dvi::run_campaign(plan, 1);
  ASSERT_EQ(outcomes.size(), 9u);
  for (const auto& o : outcomes) EXPECT_TRUE(o.converged);

  const std::string path = testing::TempDir() + "ball_heatmap.svg";
  dvi::emit_heatmap(outcomes, plan, path);
  const std::string svg = read_file(path);
  // Nine sample markers plus the legend dot carry the converged color.
  EXPECT_GE(count_occurrences(svg, "#2e8b57"), 10);
}

TEST(Heatmap, ThreeVaryingAxesAreRejected) {
  SweepPlan plan = reference_plan(0.05);  // all three axes vary
  const std::string path = testing::TempDir() + "bad_heatmap.svg";
  EXPECT_THROW(dvi::emit_heatmap({}, plan, path), std::invalid_argument);
}

