// Artifact emission: ordered JSON writer, trajectory CSV, output
// directory resolution.

#include "artifacts.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace dvi_cli {

// ===== JSON document =====

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string escape_text(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

JsonValue& JsonValue::set(const std::string& key, JsonValue value) {
  fields_.emplace_back(key, std::move(value));
  return *this;
}

JsonValue& JsonValue::push(JsonValue value) {
  items_.push_back(std::move(value));
  return *this;
}

void JsonValue::write(std::string& out, int indent) const {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (kind_) {
    case Kind::floating:
      out += format_double(number_);
      break;
    case Kind::integer:
      out += std::to_string(integer_);
      break;
    case Kind::boolean:
      out += flag_ ? "true" : "false";
      break;
    case Kind::text:
      out += escape_text(text_);
      break;
    case Kind::array:
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].write(out, indent + 2);
        out += i + 1 < items_.size() ? ",\n" : "\n";
      }
      out += close_pad + "]";
      break;
    case Kind::object:
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        out += pad + escape_text(fields_[i].first) + ": ";
        fields_[i].second.write(out, indent + 2);
        out += i + 1 < fields_.size() ? ",\n" : "\n";
      }
      out += close_pad + "}";
      break;
  }
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

// ===== Files =====

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing " + path);
  }
}

void write_trajectory_csv(const dvi::Trajectory& trajectory,
                          const std::string& path) {
  if (trajectory.points.empty()) {
    throw std::invalid_argument("trajectory has no points to write");
  }
  const Eigen::Index dim = trajectory.points.front().q.size();

  std::string out = "k,t";
  for (Eigen::Index i = 0; i < dim; ++i) {
    out += ",q_" + std::to_string(i);
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    out += ",v_" + std::to_string(i);
  }
  out += ",energy,autonomous_energy";
  for (const std::string& label : trajectory.charge_labels) {
    out += ",charge_" + label;
  }
  out += ",residual_norm\n";

  for (std::size_t n = 0; n < trajectory.points.size(); ++n) {
    const dvi::PhasePoint& point = trajectory.points[n];
    out += std::to_string(point.index);
    out += ',' + format_double(point.time);
    for (Eigen::Index i = 0; i < dim; ++i) {
      out += ',' + format_double(point.q[i]);
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      out += ',' + format_double(trajectory.velocities[n][i]);
    }
    out += ',' + format_double(trajectory.energies[n]);
    out += ',' + format_double(trajectory.unweighted_energies[n]);
    for (Eigen::Index g = 0; g < trajectory.charges.cols(); ++g) {
      out += ',' + format_double(
                       trajectory.charges(static_cast<Eigen::Index>(n), g));
    }
    out += ',' + format_double(trajectory.residual_norms[n]);
    out += '\n';
  }
  write_text_file(path, out);
}

std::string resolve_out_dir(const std::string& cli_out,
                            const std::string& config_dir) {
  std::string dir = cli_out;
  if (dir.empty()) dir = config_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("DVI_OUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace dvi_cli
