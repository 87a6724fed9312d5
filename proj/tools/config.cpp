// Strict JSON config ingestion: per-object allowed-key tables, typed
// accessors with file:line diagnostics, cross-field consistency rules,
// and construction of the core model/plan objects.

#include "config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace dvi_cli {

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::compare_euler: return "compare-euler";
    case Mode::sweep: return "sweep";
    case Mode::verify: return "verify";
  }
  return "?";
}

namespace {

// ===== Line-referenced diagnostics =====

// Context shared by every check: the raw text is kept so messages can
// cite the line where a key (or parse failure byte) sits.
struct Source {
  std::string path;
  std::string text;

  int line_of_byte(std::size_t byte) const {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(),
                                           text.begin() +
                                               static_cast<std::ptrdiff_t>(end),
                                           '\n'));
  }

  // First occurrence of the quoted key; good enough to point a human at
  // the right place even when section keys repeat.
  [[noreturn]] void fail_at_key(const std::string& key,
                                const std::string& message) const {
    const std::size_t pos = text.find('"' + key + '"');
    if (pos == std::string::npos) {
      throw ConfigError(path + ": " + message);
    }
    throw ConfigError(path + ":" + std::to_string(line_of_byte(pos)) + ": " +
                      message);
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(path + ": " + message);
  }
};

// ===== Typed accessors =====

void check_keys(const Source& src, const json& obj, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return item.key() == k; });
    if (!known) {
      src.fail_at_key(item.key(), "unknown key \"" + item.key() + "\" in " +
                                      context);
    }
  }
}

const json& need(const Source& src, const json& obj, const std::string& context,
                 const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    src.fail(context + " is missing required key \"" + key + "\"");
  }
  return *it;
}

const json* maybe(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_double(const Source& src, const json& v, const std::string& what) {
  if (!v.is_number()) src.fail_at_key(what, what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) src.fail_at_key(what, what + " must be finite");
  return x;
}

long long as_integer(const Source& src, const json& v,
                     const std::string& what) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    src.fail_at_key(what, what + " must be an integer");
  }
  return v.get<long long>();
}

std::uint64_t as_seed(const Source& src, const json& v,
                      const std::string& what) {
  if (!(v.is_number_unsigned() ||
        (v.is_number_integer() && v.get<long long>() >= 0))) {
    src.fail_at_key(what, what + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

bool as_bool(const Source& src, const json& v, const std::string& what) {
  if (!v.is_boolean()) src.fail_at_key(what, what + " must be a boolean");
  return v.get<bool>();
}

std::string as_string(const Source& src, const json& v,
                      const std::string& what) {
  if (!v.is_string()) src.fail_at_key(what, what + " must be a string");
  return v.get<std::string>();
}

std::vector<double> as_double_array(const Source& src, const json& v,
                                    const std::string& what) {
  if (!v.is_array()) {
    src.fail_at_key(what, what + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_number()) {
      src.fail_at_key(what, what + " must contain only numbers");
    }
    const double x = item.get<double>();
    if (!std::isfinite(x)) {
      src.fail_at_key(what, what + " must contain only finite numbers");
    }
    out.push_back(x);
  }
  return out;
}

// ===== Section parsers =====

ModelSpec parse_model(const Source& src, const json& obj) {
  ModelSpec spec;
  const std::string kind = as_string(src, need(src, obj, "model", "kind"),
                                     "model.kind");
  if (kind == "formation") {
    spec.kind = ModelKind::formation;
    check_keys(src, obj, "model",
               {"kind", "damping", "ambient_dimension", "node_count", "edges",
                "desired_lengths"});
    spec.ambient_dimension = static_cast<int>(as_integer(
        src, need(src, obj, "model", "ambient_dimension"),
        "model.ambient_dimension"));
    spec.node_count = static_cast<int>(as_integer(
        src, need(src, obj, "model", "node_count"), "model.node_count"));
    const json& edges = need(src, obj, "model", "edges");
    if (!edges.is_array()) {
      src.fail_at_key("edges", "model.edges must be an array of [tail, head] "
                               "pairs");
    }
    for (const auto& e : edges) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        src.fail_at_key("edges", "model.edges entries must be [tail, head] "
                                 "integer pairs");
      }
      spec.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    spec.desired_lengths = as_double_array(
        src, need(src, obj, "model", "desired_lengths"),
        "model.desired_lengths");
  } else if (kind == "free" || kind == "quadratic") {
    spec.kind = kind == "free" ? ModelKind::free_particle
                               : ModelKind::quadratic;
    if (kind == "free") {
      check_keys(src, obj, "model", {"kind", "damping", "dimension"});
    } else {
      check_keys(src, obj, "model",
                 {"kind", "damping", "dimension", "stiffness"});
    }
    spec.dimension = static_cast<int>(as_integer(
        src, need(src, obj, "model", "dimension"), "model.dimension"));
    if (const json* s = maybe(obj, "stiffness")) {
      spec.stiffness = as_double(src, *s, "model.stiffness");
      if (!(spec.stiffness > 0.0)) {
        src.fail_at_key("stiffness", "model.stiffness must be positive");
      }
    }
  } else {
    src.fail_at_key("kind", "model.kind must be \"formation\", \"free\", or "
                            "\"quadratic\"");
  }

  spec.damping = as_double(src, need(src, obj, "model", "damping"),
                           "model.damping");
  if (spec.damping < 0.0) {
    src.fail_at_key("damping", "model.damping must be nonnegative");
  }
  if (spec.kind == ModelKind::formation && !(spec.damping > 0.0)) {
    src.fail_at_key("damping",
                    "model.damping must be positive for formation models");
  }
  return spec;
}

IntegratorSpec parse_integrator(const Source& src, const json& obj) {
  IntegratorSpec spec;
  check_keys(src, obj, "integrator", {"h", "steps", "horizon",
                                      "overflow_guard"});
  spec.h = as_double(src, need(src, obj, "integrator", "h"), "integrator.h");
  if (!(spec.h > 0.0)) {
    src.fail_at_key("h", "integrator.h must be positive");
  }
  const json* steps = maybe(obj, "steps");
  const json* horizon = maybe(obj, "horizon");
  if ((steps != nullptr) == (horizon != nullptr)) {
    src.fail("integrator requires exactly one of \"steps\" and \"horizon\"");
  }
  if (steps != nullptr) {
    spec.steps = as_integer(src, *steps, "integrator.steps");
    if (spec.steps < 2) {
      src.fail_at_key("steps", "integrator.steps must be at least 2");
    }
    spec.horizon = spec.h * static_cast<double>(spec.steps);
  } else {
    spec.horizon = as_double(src, *horizon, "integrator.horizon");
    if (!(spec.horizon > 0.0)) {
      src.fail_at_key("horizon", "integrator.horizon must be positive");
    }
    spec.steps =
        static_cast<long long>(std::ceil(spec.horizon / spec.h - 1e-12));
    if (spec.steps < 2) {
      src.fail_at_key("horizon",
                      "integrator.horizon must span at least 2 steps");
    }
  }
  if (const json* guard = maybe(obj, "overflow_guard")) {
    spec.overflow_guard = as_double(src, *guard, "integrator.overflow_guard");
    if (!(spec.overflow_guard > 0.0)) {
      src.fail_at_key("overflow_guard",
                      "integrator.overflow_guard must be positive");
    }
  }
  return spec;
}

InitialSpec parse_initial(const Source& src, const json& obj, Mode mode) {
  InitialSpec spec;
  check_keys(src, obj, "initial",
             {"positions", "velocities", "target_positions"});
  spec.positions = as_double_array(
      src, need(src, obj, "initial", "positions"), "initial.positions");
  if (const json* v = maybe(obj, "velocities")) {
    if (mode == Mode::sweep) {
      src.fail_at_key("velocities",
                      "initial.velocities is not allowed in sweep mode: "
                      "samples start from rest");
    }
    spec.velocities = as_double_array(src, *v, "initial.velocities");
  }
  if (const json* t = maybe(obj, "target_positions")) {
    if (mode == Mode::sweep) {
      src.fail_at_key("target_positions",
                      "initial.target_positions is not allowed in sweep "
                      "mode: the base positions are the reference");
    }
    spec.target_positions =
        as_double_array(src, *t, "initial.target_positions");
  }
  return spec;
}

SweepSpec parse_sweep(const Source& src, const json& obj) {
  SweepSpec spec;
  check_keys(src, obj, "sweep",
             {"displaced_agent", "region_min", "region_max", "sampling",
              "grid_counts", "sample_count", "seed", "horizon", "h", "steps",
              "dist_tol_rel", "vel_tol", "enforce_alpha", "c_ball", "r_ball"});
  spec.displaced_agent = static_cast<int>(as_integer(
      src, need(src, obj, "sweep", "displaced_agent"),
      "sweep.displaced_agent"));
  spec.region_min = as_double_array(
      src, need(src, obj, "sweep", "region_min"), "sweep.region_min");
  spec.region_max = as_double_array(
      src, need(src, obj, "sweep", "region_max"), "sweep.region_max");

  const std::string sampling = as_string(
      src, need(src, obj, "sweep", "sampling"), "sweep.sampling");
  if (sampling == "grid") {
    spec.sampling = dvi::SamplingMode::grid;
    const json& counts = need(src, obj, "sweep", "grid_counts");
    if (!counts.is_array()) {
      src.fail_at_key("grid_counts",
                      "sweep.grid_counts must be an array of integers");
    }
    for (const auto& c : counts) {
      if (!c.is_number_integer()) {
        src.fail_at_key("grid_counts",
                        "sweep.grid_counts must contain only integers");
      }
      spec.grid_counts.push_back(c.get<int>());
    }
    if (maybe(obj, "sample_count") != nullptr) {
      src.fail_at_key("sample_count",
                      "sweep.sample_count is only for uniform_random "
                      "sampling");
    }
  } else if (sampling == "uniform_random") {
    spec.sampling = dvi::SamplingMode::uniform_random;
    spec.sample_count = static_cast<int>(as_integer(
        src, need(src, obj, "sweep", "sample_count"), "sweep.sample_count"));
    if (maybe(obj, "grid_counts") != nullptr) {
      src.fail_at_key("grid_counts",
                      "sweep.grid_counts is only for grid sampling");
    }
  } else {
    src.fail_at_key("sampling", "sweep.sampling must be \"grid\" or "
                                "\"uniform_random\"");
  }

  if (const json* seed = maybe(obj, "seed")) {
    spec.seed = as_seed(src, *seed, "sweep.seed");
  }
  if (const json* horizon = maybe(obj, "horizon")) {
    spec.horizon = as_double(src, *horizon, "sweep.horizon");
  }
  if (const json* h = maybe(obj, "h")) {
    spec.h = as_double(src, *h, "sweep.h");
  }
  if (const json* steps = maybe(obj, "steps")) {
    spec.steps = as_integer(src, *steps, "sweep.steps");
  }
  if (const json* tol = maybe(obj, "dist_tol_rel")) {
    spec.dist_tol_rel = as_double(src, *tol, "sweep.dist_tol_rel");
  }
  if (const json* tol = maybe(obj, "vel_tol")) {
    spec.vel_tol = as_double(src, *tol, "sweep.vel_tol");
  }
  if (const json* flag = maybe(obj, "enforce_alpha")) {
    spec.enforce_alpha = as_bool(src, *flag, "sweep.enforce_alpha");
  }
  if (const json* c = maybe(obj, "c_ball")) {
    spec.c_ball = as_double(src, *c, "sweep.c_ball");
  }
  if (const json* r = maybe(obj, "r_ball")) {
    spec.r_ball = as_double(src, *r, "sweep.r_ball");
  }
  return spec;
}

OutputSpec parse_output(const Source& src, const json& obj) {
  OutputSpec spec;
  check_keys(src, obj, "output", {"dir", "heatmap", "energy_tolerance"});
  if (const json* dir = maybe(obj, "dir")) {
    spec.dir = as_string(src, *dir, "output.dir");
  }
  if (const json* flag = maybe(obj, "heatmap")) {
    spec.heatmap = as_bool(src, *flag, "output.heatmap");
  }
  if (const json* tol = maybe(obj, "energy_tolerance")) {
    spec.energy_tolerance = as_double(src, *tol, "output.energy_tolerance");
    if (!(spec.energy_tolerance > 0.0)) {
      src.fail_at_key("energy_tolerance",
                      "output.energy_tolerance must be positive");
    }
  }
  return spec;
}

int model_dimension(const ModelSpec& spec) {
  return spec.kind == ModelKind::formation
             ? spec.node_count * spec.ambient_dimension
             : spec.dimension;
}

// Cross-field consistency that spans sections; core-level validation
// (graph structure, plan coherence) runs afterwards through the build
// functions so every problem surfaces at load time.
void validate_cross_field(const Source& src, const ExperimentConfig& config) {
  const int dim = model_dimension(config.model);
  if (static_cast<int>(config.initial.positions.size()) != dim) {
    src.fail_at_key("positions",
                    "initial.positions must have " + std::to_string(dim) +
                        " entries for this model");
  }
  if (!config.initial.velocities.empty() &&
      static_cast<int>(config.initial.velocities.size()) != dim) {
    src.fail_at_key("velocities",
                    "initial.velocities must have " + std::to_string(dim) +
                        " entries for this model");
  }
  if (!config.initial.target_positions.empty()) {
    if (config.model.kind != ModelKind::formation) {
      src.fail_at_key("target_positions",
                      "initial.target_positions requires a formation model");
    }
    if (static_cast<int>(config.initial.target_positions.size()) != dim) {
      src.fail_at_key("target_positions",
                      "initial.target_positions must have " +
                          std::to_string(dim) + " entries for this model");
    }
  }
  if (config.mode == Mode::sweep) {
    if (config.model.kind != ModelKind::formation) {
      src.fail("sweep mode requires a formation model");
    }
    const int d = config.model.ambient_dimension;
    if (static_cast<int>(config.sweep->region_min.size()) != d ||
        static_cast<int>(config.sweep->region_max.size()) != d) {
      src.fail_at_key("region_min",
                      "sweep region bounds must have " + std::to_string(d) +
                          " entries");
    }
  }
}

}  // namespace

Vector to_vector(const std::vector<double>& values) {
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = values[i];
  }
  return out;
}

// ===== Loading =====

ExperimentConfig load_experiment_config(const std::string& path) {
  Source src;
  src.path = path;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    src.text = buf.str();
  }

  json root;
  try {
    root = json::parse(src.text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ":" + std::to_string(src.line_of_byte(e.byte)) +
                      ": " + e.what());
  }
  if (!root.is_object()) {
    src.fail("config root must be a JSON object");
  }
  check_keys(src, root, "config",
             {"schema_version", "mode", "model", "integrator", "initial",
              "sweep", "output"});

  const long long version = as_integer(
      src, need(src, root, "config", "schema_version"), "schema_version");
  if (version != 1) {
    src.fail_at_key("schema_version",
                    "unsupported schema_version " + std::to_string(version) +
                        " (this build reads version 1)");
  }

  ExperimentConfig config;
  const std::string mode = as_string(src, need(src, root, "config", "mode"),
                                     "mode");
  if (mode == "simulate") {
    config.mode = Mode::simulate;
  } else if (mode == "compare-euler") {
    config.mode = Mode::compare_euler;
  } else if (mode == "sweep") {
    config.mode = Mode::sweep;
  } else if (mode == "verify") {
    config.mode = Mode::verify;
  } else {
    src.fail_at_key("mode", "mode must be simulate, compare-euler, sweep, or "
                            "verify");
  }

  const json& model = need(src, root, "config", "model");
  if (!model.is_object()) src.fail_at_key("model", "model must be an object");
  config.model = parse_model(src, model);

  if (const json* integrator = maybe(root, "integrator")) {
    if (config.mode == Mode::sweep) {
      src.fail_at_key("integrator",
                      "the integrator section is not allowed in sweep mode: "
                      "use the sweep section's h/steps/horizon");
    }
    if (!integrator->is_object()) {
      src.fail_at_key("integrator", "integrator must be an object");
    }
    config.integrator = parse_integrator(src, *integrator);
  } else if (config.mode != Mode::sweep) {
    src.fail("config is missing the integrator section");
  }

  const json& initial = need(src, root, "config", "initial");
  if (!initial.is_object()) {
    src.fail_at_key("initial", "initial must be an object");
  }
  config.initial = parse_initial(src, initial, config.mode);

  if (const json* sweep = maybe(root, "sweep")) {
    if (config.mode != Mode::sweep) {
      src.fail_at_key("sweep",
                      "the sweep section is only allowed in sweep mode");
    }
    if (!sweep->is_object()) {
      src.fail_at_key("sweep", "sweep must be an object");
    }
    config.sweep = parse_sweep(src, *sweep);
  } else if (config.mode == Mode::sweep) {
    src.fail("sweep mode requires a sweep section");
  }

  if (const json* output = maybe(root, "output")) {
    if (!output->is_object()) {
      src.fail_at_key("output", "output must be an object");
    }
    config.output = parse_output(src, *output);
  }

  validate_cross_field(src, config);

  // Run the core-level construction now so graph/plan problems surface
  // as config errors before any computation starts.
  try {
    build_model(config.model);
    if (config.mode == Mode::sweep) {
      dvi::SweepPlan plan = build_sweep_plan(config);
      plan.finalize();
    } else {
      dvi::DampedLagrangianModel m = build_model(config.model);
      build_integrator_config(config).validate(m.dim);
    }
  } catch (const std::invalid_argument& e) {
    src.fail(std::string("invalid configuration: ") + e.what());
  }
  return config;
}

// ===== Translation into core objects =====

dvi::DampedLagrangianModel build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::formation: {
      return dvi::make_formation_model(*build_shape(spec), spec.damping);
    }
    case ModelKind::free_particle:
      return dvi::make_free_model(spec.dimension, spec.damping);
    case ModelKind::quadratic:
      return dvi::make_quadratic_model(spec.dimension, spec.damping,
                                       spec.stiffness);
  }
  throw std::invalid_argument("unreachable model kind");
}

std::optional<dvi::FormationShape> build_shape(const ModelSpec& spec) {
  if (spec.kind != ModelKind::formation) return std::nullopt;
  dvi::FormationShape shape;
  shape.topology.node_count = spec.node_count;
  shape.topology.edges = spec.edges;
  shape.ambient_dim = spec.ambient_dimension;
  shape.desired_lengths = spec.desired_lengths;
  shape.validate();
  return shape;
}

std::vector<dvi::NoetherGenerator> build_generators(const ModelSpec& spec) {
  const int d = spec.kind == ModelKind::formation ? spec.ambient_dimension
                                                  : spec.dimension;
  if (d < 1 || d > 3) return {};
  // Track exactly the symmetries of the potential: distance-based and
  // zero potentials admit the whole Euclidean family, the isotropic
  // oscillator only rotations about the origin.
  if (spec.kind != ModelKind::quadratic) return dvi::euclidean_generators(d);
  std::vector<dvi::NoetherGenerator> gens;
  if (d == 2) {
    gens.push_back(dvi::rotation_generator(2, 0, 1));
  } else if (d == 3) {
    gens.push_back(dvi::rotation_generator(3, 0, 1));
    gens.push_back(dvi::rotation_generator(3, 0, 2));
    gens.push_back(dvi::rotation_generator(3, 1, 2));
  }
  return gens;
}

dvi::IntegratorConfig build_integrator_config(const ExperimentConfig& config) {
  dvi::IntegratorConfig out;
  const IntegratorSpec& spec = *config.integrator;
  out.step = spec.h;
  out.steps = spec.steps;
  out.overflow_guard = spec.overflow_guard;
  out.initial_position = to_vector(config.initial.positions);
  out.initial_velocity =
      config.initial.velocities.empty()
          ? Vector(Vector::Zero(out.initial_position.size()))
          : to_vector(config.initial.velocities);
  return out;
}

dvi::SweepPlan build_sweep_plan(const ExperimentConfig& config) {
  dvi::SweepPlan plan;
  plan.shape = *build_shape(config.model);
  plan.base_configuration = to_vector(config.initial.positions);
  const SweepSpec& spec = *config.sweep;
  plan.displaced_agent = spec.displaced_agent;
  plan.region.min = to_vector(spec.region_min);
  plan.region.max = to_vector(spec.region_max);
  plan.sampling = spec.sampling;
  plan.grid_counts = spec.grid_counts;
  plan.sample_count = spec.sample_count;
  plan.seed = spec.seed;
  plan.kappa = config.model.damping;
  plan.horizon = spec.horizon;
  plan.h = spec.h;
  plan.steps = spec.steps;
  plan.dist_tol_rel = spec.dist_tol_rel;
  plan.vel_tol = spec.vel_tol;
  plan.enforce_alpha = spec.enforce_alpha;
  plan.c_ball = spec.c_ball;
  plan.r_ball = spec.r_ball;
  return plan;
}

}  // namespace dvi_cli
