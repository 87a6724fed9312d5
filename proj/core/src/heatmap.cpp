// SVG heatmap artifact for sweep campaigns: one marker per sample
// colored by outcome, plus axes, tick labels, the displaced agent's
// desired position, and a legend.

#include "dvi/campaign.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dvi {

namespace {

constexpr double kCanvasW = 760.0;
constexpr double kCanvasH = 620.0;
constexpr double kPlotX = 70.0;
constexpr double kPlotY = 40.0;
constexpr double kPlotSize = 500.0;

const char* kConvergedColor = "#2e8b57";
const char* kNotConvergedColor = "#e0a020";
const char* kDivergedColor = "#c03030";

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return std::string(buf);
}

const char* axis_name(int axis) {
  static const char* names[3] = {"x", "y", "z"};
  return axis >= 0 && axis < 3 ? names[axis] : "?";
}

}  // namespace

void emit_heatmap(const std::vector<SweepOutcome>& outcomes,
                  const SweepPlan& plan, const std::string& path) {
  const int d = plan.shape.ambient_dim;
  if (plan.region.min.size() != d || plan.region.max.size() != d) {
    throw std::invalid_argument("plan region does not match the ambient "
                                "dimension");
  }

  // The plot shows at most two varying axes; a 3D region must be a
  // fixed slice along the remaining axis.
  std::vector<int> varying, fixed;
  for (int a = 0; a < d; ++a) {
    (plan.region.min[a] < plan.region.max[a] ? varying : fixed).push_back(a);
  }
  if (varying.size() > 2) {
    throw std::invalid_argument(
        "heatmap needs a 2D sample region or a fixed 2D slice of a 3D one");
  }
  while (varying.size() < 2 && !fixed.empty()) {
    varying.push_back(fixed.front());
    fixed.erase(fixed.begin());
  }
  const int ax = varying.size() > 0 ? varying[0] : 0;
  const int ay = varying.size() > 1 ? varying[1] : (ax == 0 ? 1 : 0);

  // Plot ranges: the region bounds, padded when degenerate.
  auto range_of = [&](int a) {
    double lo = plan.region.min[a], hi = plan.region.max[a];
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    return std::pair<double, double>(lo, hi);
  };
  const auto [x_lo, x_hi] = range_of(ax);
  const auto [y_lo, y_hi] = range_of(ay);

  auto to_px = [&](double v) {
    return kPlotX + kPlotSize * (v - x_lo) / (x_hi - x_lo);
  };
  auto to_py = [&](double v) {
    // SVG y grows downward; flip so larger values sit higher.
    return kPlotY + kPlotSize * (y_hi - v) / (y_hi - y_lo);
  };

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvasW
      << "\" height=\"" << kCanvasH << "\" viewBox=\"0 0 " << kCanvasW << ' '
      << kCanvasH << "\">\n";
  out << "<rect width=\"" << kCanvasW << "\" height=\"" << kCanvasH
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kPlotX << "\" y=\"" << kPlotY << "\" width=\""
      << kPlotSize << "\" height=\"" << kPlotSize
      << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";

  // ===== Ticks and axis labels =====
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\">\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / ticks;
    const double px = to_px(fx);
    out << "<line x1=\"" << px << "\" y1=\"" << kPlotY + kPlotSize
        << "\" x2=\"" << px << "\" y2=\"" << kPlotY + kPlotSize + 6
        << "\" stroke=\"#404040\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << kPlotY + kPlotSize + 20
        << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";

    const double fy = y_lo + (y_hi - y_lo) * t / ticks;
    const double py = to_py(fy);
    out << "<line x1=\"" << kPlotX - 6 << "\" y1=\"" << py << "\" x2=\""
        << kPlotX << "\" y2=\"" << py << "\" stroke=\"#404040\"/>\n";
    out << "<text x=\"" << kPlotX - 9 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }
  out << "<text x=\"" << kPlotX + kPlotSize / 2 << "\" y=\""
      << kPlotY + kPlotSize + 44 << "\" text-anchor=\"middle\">"
      << axis_name(ax) << " displacement</text>\n";
  out << "<text x=\"18\" y=\"" << kPlotY + kPlotSize / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kPlotY + kPlotSize / 2 << ")\">" << axis_name(ay)
      << " displacement</text>\n";
  out << "</g>\n";

  // ===== Sample markers =====
  out << "<g stroke=\"none\" fill-opacity=\"0.85\">\n";
  for (const SweepOutcome& o : outcomes) {
    if (o.initial_displaced.size() != d) continue;
    const char* color = o.diverged
                            ? kDivergedColor
                            : (o.converged ? kConvergedColor
                                           : kNotConvergedColor);
    out << "<circle cx=\"" << fmt(to_px(o.initial_displaced[ax]), "%.2f")
        << "\" cy=\"" << fmt(to_py(o.initial_displaced[ay]), "%.2f")
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }
  out << "</g>\n";

  // ===== Desired position of the displaced agent =====
  {
    const auto block = plan.base_configuration.segment(
        plan.displaced_agent * d, d);
    const double px = to_px(block[ax]);
    const double py = to_py(block[ay]);
    out << "<g stroke=\"black\" stroke-width=\"2\">\n";
    out << "<line x1=\"" << px - 7 << "\" y1=\"" << py << "\" x2=\""
        << px + 7 << "\" y2=\"" << py << "\"/>\n";
    out << "<line x1=\"" << px << "\" y1=\"" << py - 7 << "\" x2=\"" << px
        << "\" y2=\"" << py + 7 << "\"/>\n";
    out << "</g>\n";
  }

  // ===== Legend =====
  const double lx = kPlotX + kPlotSize + 20.0;
  double ly = kPlotY + 20.0;
  out << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#202020\">\n";
  auto legend_dot = [&](const char* color, const char* text) {
    out << "<circle cx=\"" << lx << "\" cy=\"" << ly << "\" r=\"5\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << lx + 12 << "\" y=\"" << ly + 4 << "\">" << text
        << "</text>\n";
    ly += 26.0;
  };
  legend_dot(kConvergedColor, "converged");
  legend_dot(kNotConvergedColor, "not converged");
  legend_dot(kDivergedColor, "diverged");
  out << "<line x1=\"" << lx - 5 << "\" y1=\"" << ly << "\" x2=\"" << lx + 5
      << "\" y2=\"" << ly << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  out << "<line x1=\"" << lx << "\" y1=\"" << ly - 5 << "\" x2=\"" << lx
      << "\" y2=\"" << ly + 5 << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << lx + 12 << "\" y=\"" << ly + 4
      << "\">desired position</text>\n";
  out << "</g>\n";

  out << "</svg>\n";
  if (!out.good()) {
    throw std::runtime_error("failed while writing " + path);
  }
}

}  // namespace dvi
