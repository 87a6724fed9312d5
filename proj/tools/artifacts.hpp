// Artifact emission for the command-line tool: a small ordered JSON
// writer whose floats carry 17 significant digits, the per-step
// trajectory CSV, and output-directory resolution.
#pragma once

#include "dvi/integrator.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dvi_cli {

// ===== JSON document =====

// Insertion-ordered JSON value.  Numbers print through %.17g so every
// reread is bit-exact; nlohmann's shortest-representation output would
// drop digits, so documents are emitted by hand.
class JsonValue {
 public:
  JsonValue() : kind_(Kind::object) {}
  JsonValue(double x) : kind_(Kind::floating), number_(x) {}
  JsonValue(long long x) : kind_(Kind::integer), integer_(x) {}
  JsonValue(int x) : kind_(Kind::integer), integer_(x) {}
  JsonValue(unsigned long long x)
      : kind_(Kind::integer), integer_(static_cast<long long>(x)) {}
  JsonValue(bool x) : kind_(Kind::boolean), flag_(x) {}
  JsonValue(const char* x) : kind_(Kind::text), text_(x) {}
  JsonValue(std::string x) : kind_(Kind::text), text_(std::move(x)) {}

  static JsonValue object() { return JsonValue(); }
  static JsonValue array() {
    JsonValue v;
    v.kind_ = Kind::array;
    return v;
  }

  // Object field (insertion order preserved); returns *this for chains.
  JsonValue& set(const std::string& key, JsonValue value);
  // Array element.
  JsonValue& push(JsonValue value);

  // Pretty serialization with two-space indentation and a trailing
  // newline at the top level.
  std::string dump() const;

 private:
  enum class Kind { floating, integer, boolean, text, array, object };

  void write(std::string& out, int indent) const;

  Kind kind_;
  double number_ = 0.0;
  long long integer_ = 0;
  bool flag_ = false;
  std::string text_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> fields_;
};

// %.17g rendering shared by every artifact writer.
std::string format_double(double x);

// ===== Files =====

// Writes the whole string, throwing std::runtime_error when the path
// cannot be opened or the write fails.
void write_text_file(const std::string& path, const std::string& content);

// Per-node rows of a run:
//   k,t,q_0..q_{d-1},v_0..v_{d-1},energy,autonomous_energy,
//   charge_<label>..,residual_norm
// `energy` is the weighted discrete energy (zero-filled for the Euler
// baseline, which has none) and `autonomous_energy` the physical
// trapezoidal energy usable across methods.
void write_trajectory_csv(const dvi::Trajectory& trajectory,
                          const std::string& path);

// Output directory priority: --out flag, then the config's output.dir,
// then $DVI_OUT_DIR, then the working directory.  Creates the directory
// tree and returns the chosen path.
std::string resolve_out_dir(const std::string& cli_out,
                            const std::string& config_dir);

}  // namespace dvi_cli
