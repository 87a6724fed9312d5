// Experiment configuration: the versioned JSON schema, strict parsing
// with unknown-key rejection and line-referenced errors, and the
// translation into core model/plan objects.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvi/campaign.hpp"
#include "dvi/formation.hpp"
#include "dvi/integrator.hpp"
#include "dvi/model.hpp"
#include "dvi/noether.hpp"

namespace dvi_cli {

using dvi::Vector;

// Configuration problem with a file/line-referenced message; the CLI
// maps it to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stacked Eigen vector from a parsed number array.
Vector to_vector(const std::vector<double>& values);

enum class Mode { simulate, compare_euler, sweep, verify };

std::string mode_name(Mode mode);

// ===== Parsed sections =====

enum class ModelKind { formation, free_particle, quadratic };

struct ModelSpec {
  ModelKind kind = ModelKind::formation;
  double damping = 0.0;

  // Plain-potential models.
  int dimension = 0;
  double stiffness = 1.0;

  // Formation models.
  int ambient_dimension = 0;
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> desired_lengths;
};

struct IntegratorSpec {
  double h = 0.0;
  long long steps = 0;     // exactly one of steps/horizon is set
  double horizon = 0.0;
  double overflow_guard = 1e12;
};

struct InitialSpec {
  std::vector<double> positions;
  std::vector<double> velocities;        // empty means rest
  std::vector<double> target_positions;  // optional congruence reference
};

struct SweepSpec {
  int displaced_agent = 0;
  std::vector<double> region_min;
  std::vector<double> region_max;
  dvi::SamplingMode sampling = dvi::SamplingMode::uniform_random;
  std::vector<int> grid_counts;
  int sample_count = 0;
  std::uint64_t seed = 0;
  double horizon = 5.0;
  double h = 0.0;
  long long steps = 0;
  double dist_tol_rel = 0.01;
  double vel_tol = 0.1;
  bool enforce_alpha = false;
  double c_ball = 1.0;
  double r_ball = 1.0;
};

struct OutputSpec {
  std::string dir;                // empty falls through to --out/env/"."
  bool heatmap = true;            // sweep only
  double energy_tolerance = 1e-3; // summary time-to-energy gate
};

struct ExperimentConfig {
  Mode mode = Mode::simulate;
  ModelSpec model;
  std::optional<IntegratorSpec> integrator;
  InitialSpec initial;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
};

// ===== Loading =====

// Parses and schema-validates the file.  Unknown keys anywhere, a
// missing/unsupported schema_version, type mismatches, and cross-field
// inconsistencies (e.g. both steps and horizon) all raise ConfigError
// with a "file:line:" prefix where a location is known.
ExperimentConfig load_experiment_config(const std::string& path);

// ===== Translation into core objects =====

// The model the config describes; formation configs also expose the
// shape for congruence/diagnostic use.
dvi::DampedLagrangianModel build_model(const ModelSpec& spec);
std::optional<dvi::FormationShape> build_shape(const ModelSpec& spec);

// Symmetry generators tracked along trajectories — exactly the
// symmetries of the potential: the full Euclidean family for formation
// and free models, rotations about the origin for the isotropic
// oscillator (ambient dimensions ≤ 3; empty otherwise).
std::vector<dvi::NoetherGenerator> build_generators(const ModelSpec& spec);

// Integrator configuration for simulate/compare/verify runs.
dvi::IntegratorConfig build_integrator_config(const ExperimentConfig& config);

// Sweep plan for sweep runs (mode must be sweep).
dvi::SweepPlan build_sweep_plan(const ExperimentConfig& config);

}  // namespace dvi_cli
