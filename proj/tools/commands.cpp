// Command implementations: load the validated configuration, run the
// requested computation, emit artifacts, and map results to exit codes.

#include "commands.hpp"

#include "artifacts.hpp"
#include "config.hpp"

#include "dvi/campaign.hpp"
#include "dvi/extended_energy.hpp"
#include "dvi/hamiltonian.hpp"
#include "dvi/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>

namespace dvi_cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ExperimentConfig load_for(Mode expected, const CliOptions& options) {
  ExperimentConfig config = load_experiment_config(options.config_path);
  if (config.mode != expected) {
    throw ConfigError(options.config_path + ": config mode is \"" +
                      mode_name(config.mode) + "\" but the " +
                      mode_name(expected) + " command was invoked");
  }
  return config;
}

// First node time from which the autonomous energy stays below the
// tolerance through the end of the run; -1 when it never settles.
double time_to_energy_below(const dvi::Trajectory& trajectory, double tol) {
  const std::vector<double>& energy = trajectory.unweighted_energies;
  std::size_t first_settled = energy.size();
  for (std::size_t i = energy.size(); i-- > 0;) {
    if (energy[i] < tol) {
      first_settled = i;
    } else {
      break;
    }
  }
  if (first_settled == energy.size()) return -1.0;
  return trajectory.points[first_settled].time;
}

// Shared per-method summary block for simulate/compare artifacts.
JsonValue method_block(const dvi::Trajectory& trajectory, double energy_tol) {
  JsonValue block;
  block.set("diverged", trajectory.diverged())
      .set("diverged_at", trajectory.diverged_at.value_or(-1))
      .set("stable", !trajectory.diverged())
      .set("final_time", trajectory.points.back().time)
      .set("final_energy", trajectory.unweighted_energies.back())
      .set("time_to_energy_tolerance",
           time_to_energy_below(trajectory, energy_tol));
  return block;
}

}  // namespace

// ===== simulate =====

int run_simulate(const CliOptions& options) {
  const ExperimentConfig config = load_for(Mode::simulate, options);
  const dvi::DampedLagrangianModel model = build_model(config.model);
  const std::vector<dvi::NoetherGenerator> generators =
      build_generators(config.model);
  const dvi::IntegratorConfig run = build_integrator_config(config);

  const auto start = Clock::now();
  const dvi::Trajectory trajectory = dvi::integrate(model, run, generators);
  const double wall = seconds_since(start);

  const std::string dir = resolve_out_dir(options.out_dir, config.output.dir);
  write_trajectory_csv(trajectory, dir + "/trajectory.csv");

  JsonValue summary;
  summary.set("mode", "simulate")
      .set("h", run.step)
      .set("steps", run.steps)
      .set("dimension", model.dim)
      .set("wall_time_seconds", wall)
      .set("diverged", trajectory.diverged())
      .set("diverged_at", trajectory.diverged_at.value_or(-1))
      .set("final_time", trajectory.points.back().time)
      .set("final_energy", trajectory.unweighted_energies.back())
      .set("energy_tolerance", config.output.energy_tolerance)
      .set("time_to_energy_tolerance",
           time_to_energy_below(trajectory, config.output.energy_tolerance));

  if (!config.initial.target_positions.empty()) {
    const auto shape = build_shape(config.model);
    const dvi::SweepOutcome outcome = dvi::classify_outcome(
        *shape, to_vector(config.initial.target_positions), trajectory);
    summary.set("converged", outcome.converged)
        .set("steps_to_converge", outcome.steps_to_converge)
        .set("time_to_converge",
             outcome.steps_to_converge >= 0
                 ? static_cast<double>(outcome.steps_to_converge) * run.step
                 : -1.0)
        .set("final_discrepancy", outcome.final_discrepancy)
        .set("final_max_speed", outcome.final_max_speed);
  }
  write_text_file(dir + "/summary.json", summary.dump());

  std::cout << "simulate: " << trajectory.last_index() << " of " << run.steps
            << " steps, "
            << (trajectory.diverged() ? "overflow guard tripped" : "completed")
            << ", artifacts in " << dir << "\n";
  return trajectory.diverged() ? 2 : 0;
}

// ===== compare-euler =====

int run_compare(const CliOptions& options) {
  const ExperimentConfig config = load_for(Mode::compare_euler, options);
  const dvi::DampedLagrangianModel model = build_model(config.model);
  const std::vector<dvi::NoetherGenerator> generators =
      build_generators(config.model);
  const dvi::IntegratorConfig run = build_integrator_config(config);

  const auto start = Clock::now();
  const dvi::Trajectory variational = dvi::integrate(model, run, generators);
  const dvi::Trajectory euler = dvi::euler_trajectory(model, run);
  const double wall = seconds_since(start);

  const std::string dir = resolve_out_dir(options.out_dir, config.output.dir);
  write_trajectory_csv(variational, dir + "/variational.csv");
  write_trajectory_csv(euler, dir + "/euler.csv");

  const std::size_t common =
      std::min(variational.points.size(), euler.points.size());
  double max_deviation = 0.0;
  for (std::size_t i = 0; i < common; ++i) {
    max_deviation = std::max(
        max_deviation,
        (variational.points[i].q - euler.points[i].q).norm());
  }

  const double tol = config.output.energy_tolerance;
  JsonValue comparison;
  comparison.set("mode", "compare-euler")
      .set("h", run.step)
      .set("steps", run.steps)
      .set("energy_tolerance", tol)
      .set("variational", method_block(variational, tol))
      .set("euler", method_block(euler, tol))
      .set("compared_nodes", static_cast<long long>(common))
      .set("max_position_deviation", max_deviation)
      .set("wall_time_seconds", wall);
  write_text_file(dir + "/comparison.json", comparison.dump());

  auto describe = [&](const char* name, const dvi::Trajectory& t) {
    std::cout << name << ": ";
    if (t.diverged()) {
      std::cout << "overflow guard tripped at k=" << *t.diverged_at << "\n";
      return;
    }
    const double settle = time_to_energy_below(t, tol);
    std::cout << "stable, energy<" << tol;
    if (settle >= 0.0) {
      std::cout << " from t=" << settle << "s\n";
    } else {
      std::cout << " not reached\n";
    }
  };
  describe("variational", variational);
  describe("euler", euler);
  std::cout << "max position deviation over " << common
            << " common nodes: " << format_double(max_deviation) << "\n";
  return variational.diverged() ? 2 : 0;
}

// ===== sweep =====

int run_sweep(const CliOptions& options) {
  const ExperimentConfig config = load_for(Mode::sweep, options);
  dvi::SweepPlan plan = build_sweep_plan(config);
  if (options.seed.has_value()) plan.seed = *options.seed;
  plan.finalize();
  const double alpha = dvi::step_size_bound_alpha(plan.shape, plan.kappa,
                                                  plan.c_ball, plan.r_ball);

  const auto start = Clock::now();
  const std::vector<dvi::SweepOutcome> outcomes =
      dvi::run_campaign(plan, options.threads);
  const double wall = seconds_since(start);

  const std::string dir = resolve_out_dir(options.out_dir, config.output.dir);
  dvi::write_sweep_csv(outcomes, plan, dir + "/sweep.csv");

  int varying_axes = 0;
  for (Eigen::Index i = 0; i < plan.region.min.size(); ++i) {
    if (plan.region.min[i] < plan.region.max[i]) ++varying_axes;
  }
  bool heatmap_written = false;
  if (config.output.heatmap && varying_axes <= 2) {
    dvi::emit_heatmap(outcomes, plan, dir + "/heatmap.svg");
    heatmap_written = true;
  }

  long long converged = 0;
  long long diverged = 0;
  for (const dvi::SweepOutcome& outcome : outcomes) {
    converged += outcome.converged ? 1 : 0;
    diverged += outcome.diverged ? 1 : 0;
  }
  const double fraction =
      outcomes.empty() ? 0.0
                       : static_cast<double>(converged) /
                             static_cast<double>(outcomes.size());

  JsonValue summary;
  summary.set("mode", "sweep")
      .set("samples", static_cast<long long>(outcomes.size()))
      .set("converged_count", converged)
      .set("diverged_count", diverged)
      .set("fraction_converged", fraction)
      .set("h", plan.h)
      .set("steps", plan.steps)
      .set("horizon", plan.horizon)
      .set("step_size_bound", alpha)
      .set("enforce_alpha", plan.enforce_alpha)
      .set("seed", static_cast<long long>(plan.seed))
      .set("workers", options.threads)
      .set("heatmap_written", heatmap_written)
      .set("wall_time_seconds", wall);
  write_text_file(dir + "/sweep_summary.json", summary.dump());

  std::cout << "fraction converged: " << format_double(fraction) << " ("
            << converged << " of " << outcomes.size() << " samples)\n";
  if (!heatmap_written && config.output.heatmap) {
    std::cout << "heatmap skipped: " << varying_axes
              << " varying region axes exceed the plottable two\n";
  }
  std::cout << "artifacts in " << dir << "\n";
  return 0;
}

// ===== verify =====

namespace {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

Vector random_vector(std::mt19937_64& rng, int dim, double scale) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = scale * unit(rng);
  return v;
}

// Reference flow of q̈ = −c·q̇ − ∇V(q) via classical Runge–Kutta.
void rk4_step(const dvi::DampedLagrangianModel& model, double dt, Vector& q,
              Vector& v) {
  const auto accel = [&](const Vector& qq, const Vector& vv) {
    return Vector(-model.damping * vv - model.potential_gradient(qq));
  };
  const Vector k1q = v;
  const Vector k1v = accel(q, v);
  const Vector k2q = v + 0.5 * dt * k1v;
  const Vector k2v = accel(q + 0.5 * dt * k1q, v + 0.5 * dt * k1v);
  const Vector k3q = v + 0.5 * dt * k2v;
  const Vector k3v = accel(q + 0.5 * dt * k2q, v + 0.5 * dt * k2v);
  const Vector k4q = v + dt * k3v;
  const Vector k4v = accel(q + dt * k3q, v + dt * k3v);
  q += (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

// Final position of the variational update after `steps` intervals with
// the momentum-consistent seed q_1 = inverse left leg at p = v0.
Vector variational_final_position(const dvi::DampedLagrangianModel& model,
                                  double h, long long steps, const Vector& q0,
                                  const Vector& v0) {
  Vector prev = q0;
  Vector curr = dvi::invert_legendre_minus(model, 0, h, q0, v0);
  for (long long k = 1; k < steps; ++k) {
    Vector next = dvi::explicit_step(model, k, h, prev, curr);
    prev = std::move(curr);
    curr = std::move(next);
  }
  return curr;
}

}  // namespace

int run_verify(const CliOptions& options) {
  const ExperimentConfig config = load_for(Mode::verify, options);
  const dvi::DampedLagrangianModel model = build_model(config.model);
  const std::vector<dvi::NoetherGenerator> generators =
      build_generators(config.model);
  const dvi::IntegratorConfig run = build_integrator_config(config);
  const double h = run.step;
  const std::uint64_t seed = options.seed.value_or(20260814ull);

  const auto start = Clock::now();
  std::vector<CheckResult> checks;

  // --- update stationarity on random position tuples ---
  {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Vector q0 = random_vector(rng, model.dim, 1.0);
      const Vector q1 = q0 + random_vector(rng, model.dim, 0.5);
      const long long k = trial % 7;
      Vector q2 = dvi::explicit_step(model, k, h, q0, q1);
      if (options.corrupt_coefficient) {
        // Negative control: mis-scale the update increment so the
        // stationarity equation no longer holds.
        q2 = q1 + (q2 - q1) * (1.0 + 1e-3);
      }
      const double tol = 1e-10 * (1.0 + q1.norm() / h);
      const double residual = dvi::del_residual(model, k, h, q0, q1, q2).norm();
      worst = std::max(worst, residual / tol);
    }
    checks.push_back({"update_stationarity", worst <= 1.0, worst, 1.0,
                      "max ‖stationarity residual‖ over 1e-10·(1+‖q1‖/h) "
                      "across 100 random tuples"});
  }

  // The configured trajectory feeds the conservation and drift checks.
  const dvi::Trajectory trajectory = dvi::integrate(model, run, generators);

  // --- momentum-pairing conservation along the configured run ---
  {
    // Conservation of the weighted charge J = e^{θ_k}·core_k is checked
    // in the decay frame, core_k = e^{−θ_k}·J_0, where rounding noise is
    // not amplified by the exponential weight on long damped runs.
    double worst = 0.0;
    const bool usable = !trajectory.diverged() && !generators.empty();
    for (const dvi::NoetherGenerator& gen : generators) {
      const double first = dvi::noether_charge_core(
          model, gen, h, trajectory.points[0].q, trajectory.points[1].q);
      const double denom = std::max(1.0, std::abs(first));
      for (std::size_t i = 0; i + 1 < trajectory.points.size(); ++i) {
        const double core = dvi::noether_charge_core(
            model, gen, h, trajectory.points[i].q, trajectory.points[i + 1].q);
        const double expected = dvi::weighted_value(
            -dvi::log_step_weight(model.damping,
                                  trajectory.points[i].index, h),
            first);
        worst = std::max(worst, std::abs(core - expected) / denom);
      }
    }
    checks.push_back(
        {"charge_conservation", usable && worst <= 1e-9, worst, 1e-9,
         usable ? "max decay-frame deviation of every tracked pairing from "
                  "its conserved weighted value"
                : "run diverged or no generators tracked"});
  }

  // --- symplecticity of the phase-space step ---
  {
    std::mt19937_64 rng(seed + 1);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const Vector q =
          run.initial_position + random_vector(rng, model.dim, 0.3);
      const Vector p = random_vector(rng, model.dim, 0.3);
      worst = std::max(
          worst, dvi::symplecticity_defect(model, trial % 5, h, q, p));
    }
    checks.push_back({"symplecticity", worst <= 1e-6, worst, 1e-6,
                      "max finite-difference defect of D^T Ω D − Ω at 25 "
                      "random phase points"});
  }

  // --- agreement of the three phase-step constructions ---
  {
    std::mt19937_64 rng(seed + 2);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const Vector q =
          run.initial_position + random_vector(rng, model.dim, 0.3);
      const Vector p = random_vector(rng, model.dim, 0.3);
      const long long k = 1 + trial % 5;
      const auto direct = dvi::hamiltonian_step(model, k, h, q, p);
      const auto via_pre =
          dvi::hamiltonian_step_from_pre_transform(model, k, h, q, p);
      const auto via_post =
          dvi::hamiltonian_step_from_post_transform(model, k, h, q, p);
      worst = std::max({worst,
                        (direct.first - via_pre.first).norm(),
                        (direct.second - via_pre.second).norm(),
                        (direct.first - via_post.first).norm(),
                        (direct.second - via_post.second).norm()});
    }
    checks.push_back({"phase_step_agreement", worst <= 1e-10, worst, 1e-10,
                      "max disagreement of the direct/pre/post phase-step "
                      "constructions at 25 random phase points"});
  }

  // --- second-order accuracy against a resolved reference flow ---
  {
    const double horizon = 0.5;
    std::vector<double> errors;
    for (const double step : {h, h / 2.0, h / 4.0}) {
      const long long steps =
          static_cast<long long>(std::llround(horizon / step));
      Vector q_ref = run.initial_position;
      Vector v_ref = run.initial_velocity;
      const double dt = step / 100.0;
      for (long long i = 0; i < steps * 100; ++i) {
        rk4_step(model, dt, q_ref, v_ref);
      }
      const Vector q_end = variational_final_position(
          model, step, steps, run.initial_position, run.initial_velocity);
      errors.push_back((q_end - q_ref).norm());
    }
    double worst_deviation = 0.0;
    std::string orders = "observed orders:";
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
      const double order = std::log2(errors[i] / errors[i + 1]);
      orders += " " + format_double(order);
      worst_deviation = std::max(worst_deviation, std::abs(order - 2.0));
    }
    checks.push_back({"convergence_order", worst_deviation <= 0.2,
                      worst_deviation, 0.2,
                      orders + " over steps {h, h/2, h/4} against a 100x "
                               "finer reference flow"});
  }

  // --- bounded, second-order extended-energy drift ---
  {
    const std::vector<double> drift =
        dvi::extended_energy_drift(model, trajectory);
    dvi::IntegratorConfig half = run;
    half.step = h / 2.0;
    half.steps = run.steps * 2;
    const std::vector<double> drift_half =
        dvi::extended_energy_drift(model, dvi::integrate(model, half));

    auto max_abs = [](const std::vector<double>& xs) {
      double m = 0.0;
      for (const double x : xs) m = std::max(m, std::abs(x));
      return m;
    };
    const double full_max = max_abs(drift);
    const double half_max = max_abs(drift_half);

    // The drift is a telescoped defect of exponentially weighted
    // energies, so its natural scale is the largest weighted energy the
    // run tracks (E_d carries one extra factor of h).
    const double scale =
        std::max(1.0, max_abs(trajectory.energies) / h);
    const double bound = 0.05 * scale;
    checks.push_back({"energy_drift_bounded",
                      !trajectory.diverged() && full_max <= bound, full_max,
                      bound,
                      "max |extended-energy drift| against 5% of the "
                      "weighted energy scale"});

    if (half_max == 0.0) {
      checks.push_back({"energy_drift_step_scaling", full_max == 0.0,
                        full_max, 0.0, "degenerate drift sequence"});
    } else {
      const double ratio = full_max / half_max;
      checks.push_back({"energy_drift_step_scaling",
                        ratio >= 2.0 && ratio <= 8.0, ratio, 8.0,
                        "halving h scales the max drift by this factor; "
                        "second-order backward error wants [2, 8]"});
    }
  }

  // --- autonomous reduction: weighted and physical energies coincide ---
  if (model.damping == 0.0) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < trajectory.points.size(); ++i) {
      const Vector& q0 = trajectory.points[i].q;
      const Vector& q1 = trajectory.points[i + 1].q;
      const long long k = trajectory.points[i].index;
      const double weighted = dvi::discrete_energy(model, k, h, q0, q1);
      const double physical = h * dvi::interval_energy(model, h, q0, q1);
      worst = std::max(worst, std::abs(weighted - physical) /
                                  std::max(1.0, std::abs(physical)));
    }
    checks.push_back({"autonomous_energy_identity", worst <= 1e-12, worst,
                      1e-12,
                      "per-interval weighted discrete energy equals h times "
                      "the trapezoidal energy when damping is zero"});
  }

  const double wall = seconds_since(start);
  const bool all_pass =
      std::all_of(checks.begin(), checks.end(),
                  [](const CheckResult& c) { return c.pass; });

  JsonValue report;
  report.set("mode", "verify")
      .set("config", options.config_path)
      .set("corrupt_coefficient", options.corrupt_coefficient)
      .set("h", h)
      .set("steps", run.steps)
      .set("dimension", model.dim)
      .set("damping", model.damping);
  JsonValue list = JsonValue::array();
  for (const CheckResult& check : checks) {
    JsonValue entry;
    entry.set("name", check.name)
        .set("pass", check.pass)
        .set("measured", check.measured)
        .set("threshold", check.threshold)
        .set("detail", check.detail);
    list.push(std::move(entry));
  }
  report.set("checks", std::move(list))
      .set("all_pass", all_pass)
      .set("wall_time_seconds", wall);

  const std::string dir = resolve_out_dir(options.out_dir, config.output.dir);
  write_text_file(dir + "/verify_report.json", report.dump());

  for (const CheckResult& check : checks) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
              << " (measured=" << format_double(check.measured)
              << ", threshold=" << format_double(check.threshold) << ")\n";
  }
  std::cout << "verification " << (all_pass ? "passed" : "FAILED") << ", "
            << checks.size() << " checks, report in " << dir << "\n";
  return all_pass ? 0 : 3;
}

}  // namespace dvi_cli
