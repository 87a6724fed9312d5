// Sweep-campaign execution: plan validation, deterministic sample
// generation, streaming per-sample simulation, classification, and the
// CSV artifact.

#include "dvi/campaign.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dvi {

// ===== Plan =====

void SweepPlan::finalize() {
  shape.validate();
  if (base_configuration.size() != shape.stacked_dim()) {
    throw std::invalid_argument("base configuration size must match the "
                                "shape's stacked dimension");
  }
  if (!base_configuration.allFinite()) {
    throw std::invalid_argument("base configuration must be finite");
  }
  if (displaced_agent < 0 || displaced_agent >= shape.topology.node_count) {
    throw std::invalid_argument("displaced agent index out of range");
  }
  const int d = shape.ambient_dim;
  if (region.min.size() != d || region.max.size() != d) {
    throw std::invalid_argument("sample region must match the ambient "
                                "dimension");
  }
  for (int a = 0; a < d; ++a) {
    if (!(region.min[a] <= region.max[a])) {
      throw std::invalid_argument("sample region has min > max on axis " +
                                  std::to_string(a));
    }
  }
  if (sampling == SamplingMode::grid) {
    if (grid_counts.size() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("grid sampling needs one count per axis");
    }
    for (int c : grid_counts) {
      if (c < 1) throw std::invalid_argument("grid counts must be >= 1");
    }
  } else {
    if (sample_count < 1) {
      throw std::invalid_argument("random sampling needs sample_count >= 1");
    }
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be positive and finite");
  }
  if (!(dist_tol_rel > 0.0) || !(vel_tol > 0.0)) {
    throw std::invalid_argument("classification tolerances must be positive");
  }
  if (!(overflow_guard > 0.0)) {
    throw std::invalid_argument("overflow guard must be positive");
  }

  // Step-size / horizon bookkeeping: the horizon h·steps is the contract;
  // unset fields are derived from it.
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  const double alpha = step_size_bound_alpha(shape, kappa, c_ball, r_ball);
  if (h == 0.0) {
    h = std::min(alpha, 0.014);
  }
  require_positive_step(h);
  if (steps == 0) {
    steps = static_cast<long long>(std::ceil(horizon / h - 1e-12));
  }
  if (steps < 2) {
    throw std::invalid_argument("horizon/h must yield at least 2 steps");
  }
  // Keep the invariant h·steps = horizon exact after derivation.
  horizon = h * static_cast<double>(steps);
  if (enforce_alpha && h > alpha * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "step " + std::to_string(h) + " exceeds the step-size bound " +
        std::to_string(alpha));
  }
}

// ===== Sample generation =====

namespace {

std::vector<Vector> generate_samples(const SweepPlan& plan) {
  const int d = plan.shape.ambient_dim;
  std::vector<Vector> samples;

  if (plan.sampling == SamplingMode::grid) {
    long long total = 1;
    for (int c : plan.grid_counts) total *= c;
    samples.reserve(static_cast<std::size_t>(total));
    // Nested axis loops with the last axis fastest, realized by mixed
    // radix decomposition of the flat index.
    for (long long flat = 0; flat < total; ++flat) {
      Vector pos(d);
      long long rest = flat;
      for (int a = d - 1; a >= 0; --a) {
        const int count = plan.grid_counts[static_cast<std::size_t>(a)];
        const int i = static_cast<int>(rest % count);
        rest /= count;
        const double lo = plan.region.min[a], hi = plan.region.max[a];
        pos[a] = count == 1
                     ? 0.5 * (lo + hi)
                     : lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(count - 1);
      }
      samples.push_back(std::move(pos));
    }
    return samples;
  }

  // Uniform random: one generator consumed in sample order, one draw per
  // varying axis; degenerate axes take their bound without touching the
  // generator, so the in-sample draw order of the varying axes is stable.
  std::mt19937_64 rng(plan.seed);
  samples.reserve(static_cast<std::size_t>(plan.sample_count));
  for (int s = 0; s < plan.sample_count; ++s) {
    Vector pos(d);
    for (int a = 0; a < d; ++a) {
      const double lo = plan.region.min[a], hi = plan.region.max[a];
      if (lo == hi) {
        pos[a] = lo;
      } else {
        std::uniform_real_distribution<double> axis(lo, hi);
        pos[a] = axis(rng);
      }
    }
    samples.push_back(std::move(pos));
  }
  return samples;
}

// Streaming simulation and classification of one sample: positions are
// advanced pairwise, congruence is evaluated per node, and only the
// running suffix information is retained.
SweepOutcome simulate_sample(const DampedLagrangianModel& model,
                             const SweepPlan& plan, const Vector& start) {
  const int d = plan.shape.ambient_dim;
  const double h = plan.h;

  SweepOutcome outcome;
  outcome.initial_displaced = start;

  Vector q0 = plan.base_configuration;
  q0.segment(plan.displaced_agent * d, d) = start;

  long long suffix_start = -1;  // first index of the current congruent tail
  double last_discrepancy = 0.0;
  double last_speed = 0.0;

  auto record_node = [&](long long k, const Vector& q, double speed) {
    last_discrepancy =
        max_distance_discrepancy(d, plan.base_configuration, q);
    last_speed = speed;
    const bool congruent =
        last_discrepancy <= plan.dist_tol_rel && speed < plan.vel_tol;
    if (congruent) {
      if (suffix_start < 0) suffix_start = k;
    } else {
      suffix_start = -1;
    }
  };

  // Node 0 starts at rest; the kinematic seed with zero velocity makes
  // node 1 coincide with node 0.
  record_node(0, q0, 0.0);
  Vector q_prev = q0;
  Vector q_cur = q0;
  record_node(1, q_cur, 0.0);

  for (long long k = 0; k + 2 <= plan.steps; ++k) {
    Vector q_next = explicit_step(model, k, h, q_prev, q_cur);
    if (!q_next.allFinite() ||
        q_next.cwiseAbs().maxCoeff() > plan.overflow_guard) {
      outcome.diverged = true;
      break;
    }
    const double speed = max_agent_speed(d, (q_next - q_cur) / h);
    record_node(k + 2, q_next, speed);
    q_prev = std::move(q_cur);
    q_cur = std::move(q_next);
  }

  outcome.final_discrepancy = last_discrepancy;
  outcome.final_max_speed = last_speed;
  outcome.converged = !outcome.diverged && suffix_start >= 0;
  outcome.steps_to_converge = outcome.converged ? suffix_start : -1;
  return outcome;
}

}  // namespace

// ===== Campaign execution =====

std::vector<SweepOutcome> run_campaign(SweepPlan plan, int workers) {
  plan.finalize();
  const DampedLagrangianModel model =
      make_formation_model(plan.shape, plan.kappa);
  const std::vector<Vector> samples = generate_samples(plan);
  std::vector<SweepOutcome> outcomes(samples.size());

  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(samples.size()));

  if (workers <= 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      outcomes[i] = simulate_sample(model, plan, samples[i]);
    }
    return outcomes;
  }

  // Independent samples, claimed through an atomic counter and written
  // to index-keyed slots: the schedule cannot affect any output.
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) break;
      outcomes[i] = simulate_sample(model, plan, samples[i]);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return outcomes;
}

SweepOutcome classify_outcome(const FormationShape& shape,
                              const Vector& base_configuration,
                              const Trajectory& trajectory,
                              double dist_tol_rel, double vel_tol) {
  shape.validate();
  if (!(dist_tol_rel > 0.0) || !(vel_tol > 0.0)) {
    throw std::invalid_argument("classification tolerances must be positive");
  }
  const int d = shape.ambient_dim;
  const auto& pts = trajectory.points;
  if (pts.empty()) {
    throw std::invalid_argument("cannot classify an empty trajectory");
  }

  SweepOutcome outcome;
  outcome.initial_displaced = Vector();
  outcome.diverged = trajectory.diverged();

  long long suffix_start = -1;
  double last_discrepancy = 0.0;
  double last_speed = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double speed =
        i == 0 ? 0.0
               : max_agent_speed(
                     d, (pts[i].q - pts[i - 1].q) / trajectory.step);
    last_discrepancy =
        max_distance_discrepancy(d, base_configuration, pts[i].q);
    last_speed = speed;
    const bool congruent =
        last_discrepancy <= dist_tol_rel && speed < vel_tol;
    if (congruent) {
      if (suffix_start < 0) suffix_start = pts[i].index;
    } else {
      suffix_start = -1;
    }
  }

  outcome.final_discrepancy = last_discrepancy;
  outcome.final_max_speed = last_speed;
  outcome.converged = !outcome.diverged && suffix_start >= 0;
  outcome.steps_to_converge = outcome.converged ? suffix_start : -1;
  return outcome;
}

// ===== CSV artifact =====

void write_sweep_csv(const std::vector<SweepOutcome>& outcomes,
                     const SweepPlan& plan, const std::string& path) {
  const int d = plan.shape.ambient_dim;
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }

  out << "sample_index,x0,y0";
  if (d == 3) out << ",z0";
  out << ",converged,diverged,steps_to_converge,final_discrepancy,"
         "final_max_speed\n";

  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SweepOutcome& o = outcomes[i];
    out << i;
    for (int a = 0; a < d; ++a) out << ',' << fmt(o.initial_displaced[a]);
    out << ',' << (o.converged ? 1 : 0) << ',' << (o.diverged ? 1 : 0) << ','
        << o.steps_to_converge << ',' << fmt(o.final_discrepancy) << ','
        << fmt(o.final_max_speed) << '\n';
  }
  if (!out.good()) {
    throw std::runtime_error("failed while writing " + path);
  }
}

}  // namespace dvi
