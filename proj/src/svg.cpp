#include "swarmlab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace swarmlab {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(const Vec2& p) {
    x0 = std::min(x0, p.x());
    y0 = std::min(y0, p.y());
    x1 = std::max(x1, p.x());
    y1 = std::max(y1, p.y());
  }
};

}  // namespace

std::string render_svg(const SimTrace& trace, const BoundaryChain& boundary) {
  Box box;
  for (const auto& step : trace.steps) {
    for (const auto& r : step) box.add(r.position);
  }
  const bool has_targets = !trace.sweep.empty();
  if (has_targets) {
    for (const auto& rec : trace.sweep.back()) box.add(rec.target);
  }
  if (!std::isfinite(box.x0)) box = Box{0.0, 0.0, 1.0, 1.0};
  // y grows downward in SVG; plot -y so the picture keeps its orientation
  const double w0 = std::max(box.x1 - box.x0, 1e-6);
  const double h0 = std::max(box.y1 - box.y0, 1e-6);
  const double span = std::max(w0, h0);
  const double mx = 0.05 * w0;
  const double my = 0.05 * h0;
  const double vx = box.x0 - mx, vy = -box.y1 - my;
  const double vw = w0 + 2 * mx, vh = h0 + 2 * my;
  const double stroke = 0.004 * std::max(vw, vh);
  const double arrow = 0.03 * std::max(vw, vh);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(vx) << ' ' << num(vy) << ' ' << num(vw) << ' '
     << num(vh) << "\" width=\"800\" height=\"" << num(800.0 * vh / vw) << "\">\n";

  for (const auto& seg : boundary) {
    const Vec2 along = unit_vector(seg.sweep_direction());
    const Vec2 f = seg.foot(Vec2(0.0, 0.0));
    double t0, t1;
    if (seg.extent()) {
      t0 = seg.extent()->first;
      t1 = seg.extent()->second;
    } else {
      const double reach = 2.0 * (std::abs(box.x0) + std::abs(box.x1) + std::abs(box.y0) + std::abs(box.y1) + span);
      t0 = -reach;
      t1 = reach;
    }
    const double tf = along.dot(f);
    const Vec2 a = f + (t0 - tf) * along;
    const Vec2 b = f + (t1 - tf) * along;
    os << "  <line x1=\"" << num(a.x()) << "\" y1=\"" << num(-a.y()) << "\" x2=\"" << num(b.x()) << "\" y2=\""
       << num(-b.y()) << "\" stroke=\"#000000\" stroke-width=\"" << num(2 * stroke) << "\"/>\n";
  }

  const std::size_t n = trace.steps.empty() ? 0 : trace.steps.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    const char* colour = kPalette[i % kPalette.size()];
    os << "  <polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << num(stroke) << "\" points=\"";
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
      const auto& p = trace.steps[k][i].position;
      os << (k ? " " : "") << num(p.x()) << ',' << num(-p.y());
    }
    os << "\"/>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = trace.steps.back()[i];
    const Vec2 tip = r.position + arrow * unit_vector(r.heading);
    const Vec2 left = r.position + (0.4 * arrow) * unit_vector(r.heading + kPi / 2.0);
    const Vec2 right = r.position + (0.4 * arrow) * unit_vector(r.heading - kPi / 2.0);
    os << "  <polygon fill=\"" << kPalette[i % kPalette.size()] << "\" points=\"" << num(tip.x()) << ','
       << num(-tip.y()) << ' ' << num(left.x()) << ',' << num(-left.y()) << ' ' << num(right.x()) << ','
       << num(-right.y()) << "\"/>\n";
  }
  if (has_targets) {
    for (const auto& rec : trace.sweep.back()) {
      os << "  <circle cx=\"" << num(rec.target.x()) << "\" cy=\"" << num(-rec.target.y()) << "\" r=\""
         << num(0.4 * arrow) << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" << num(stroke) << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace swarmlab
