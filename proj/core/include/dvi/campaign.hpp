// Region-of-attraction sweep campaigns: displace one agent of a
// formation across a sampled box, simulate the damped variational close
// loop to a fixed horizon, classify convergence, and emit CSV and SVG
// artifacts.  Campaigns are deterministic given the plan (seed included)
// and may execute samples concurrently without observable differences.
#pragma once

#include "dvi/formation.hpp"
#include "dvi/integrator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dvi {

// ===== Plan =====

enum class SamplingMode { grid, uniform_random };

// Axis-aligned sample box in the ambient space of the displaced agent.
struct SampleRegion {
  Vector min;
  Vector max;
};

struct SweepPlan {
  FormationShape shape;
  StackedConfiguration base_configuration;  // realizes the desired shape
  int displaced_agent = 0;
  SampleRegion region;

  SamplingMode sampling = SamplingMode::uniform_random;
  std::vector<int> grid_counts;  // per axis, grid mode only
  int sample_count = 0;          // uniform_random mode only
  std::uint64_t seed = 0;

  double kappa = 0.0;    // uniform damping gain
  double horizon = 5.0;  // h·steps product
  double h = 0.0;        // 0 requests the default min(alpha, 0.014)
  long long steps = 0;   // 0 derives ceil(horizon/h)

  double dist_tol_rel = 0.01;
  double vel_tol = 0.1;
  bool enforce_alpha = false;   // reject h above the step-size bound
  double c_ball = 1.0;          // inputs to the step-size bound
  double r_ball = 1.0;
  double overflow_guard = 1e12;

  // Fills the h/steps defaults and validates every field; idempotent.
  // Throws std::invalid_argument on inconsistent settings.
  void finalize();
};

// ===== Outcome =====

struct SweepOutcome {
  Vector initial_displaced;       // sampled position of the moved agent
  bool converged = false;         // congruent and slow at the horizon
  bool diverged = false;          // overflow guard tripped
  long long steps_to_converge = -1;  // first index of the congruent tail
  double final_discrepancy = 0.0;    // max relative pair-distance error
  double final_max_speed = 0.0;      // max agent speed at the last state
};

// ===== Campaign execution =====

// Generates the sample list (grid: nested axis loops, last axis fastest;
// random: one uniform draw per varying axis in axis order, fixed axes
// take their bound), then simulates each sample from rest and classifies
// it.  Outcomes are ordered by sample index.  `workers` ≤ 0 uses the
// hardware concurrency; samples are independent, so the worker count
// cannot change any output.
std::vector<SweepOutcome> run_campaign(SweepPlan plan, int workers = 0);

// Classification of an existing trajectory against the base shape:
// convergence means the final state passes the congruence check, and
// steps_to_converge is the first node index from which the check holds
// through the end (-1 when the final state fails).  Classification
// speeds are backward differences of consecutive positions; the initial
// node counts as at rest.
SweepOutcome classify_outcome(const FormationShape& shape,
                              const Vector& base_configuration,
                              const Trajectory& trajectory,
                              double dist_tol_rel = 0.01,
                              double vel_tol = 0.1);

// ===== Artifacts =====

// One row per sample: sample_index, x0, y0[, z0], converged(0/1),
// diverged(0/1), steps_to_converge(-1 if none), final_discrepancy,
// final_max_speed.  Floats carry 17 significant digits so rereads are
// bit-exact.  Throws std::runtime_error when the path is unwritable.
void write_sweep_csv(const std::vector<SweepOutcome>& outcomes,
                     const SweepPlan& plan, const std::string& path);

// Scalable vector graphic of the sample markers colored by outcome,
// with axes, tick labels, the displaced agent's desired position, and a
// legend.  Requires at most two varying region axes (a 2D region or a
// fixed 2D slice of a 3D one).  An empty outcome list still produces a
// valid file with axes and legend.
void emit_heatmap(const std::vector<SweepOutcome>& outcomes,
                  const SweepPlan& plan, const std::string& path);

}  // namespace dvi
