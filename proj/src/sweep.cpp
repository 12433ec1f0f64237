#include "swarmlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "swarmlab/errors.hpp"

namespace swarmlab {

std::string to_string(Side s) { return s == Side::B1 ? "B1" : "B2"; }

Side parse_side(const std::string& s) {
  if (s == "B1") return Side::B1;
  if (s == "B2") return Side::B2;
  throw SchemaError("/sweep/side", "expected \"B1\" or \"B2\"");
}

BoundarySegment::BoundarySegment(double gamma, double offset,
                                 std::optional<std::pair<double, double>> extent)
    : gamma_(gamma), line_(gamma, offset), extent_(extent) {
  if (extent_ && !(extent_->first <= extent_->second)) {
    throw ConstructionError("BoundarySegment: extent must satisfy t0 <= t1");
  }
}

BoundarySegment BoundarySegment::from_points(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  if (d.norm() == 0.0) throw ConstructionError("BoundarySegment: endpoints coincide");
  const double phi_b = std::atan2(d.y(), d.x());
  const double gamma = phi_b - kPi / 2.0;
  const Vec2 along = unit_vector(phi_b);
  return BoundarySegment(gamma, unit_vector(gamma).dot(a),
                         std::make_pair(along.dot(a), along.dot(b)));
}

Vec2 BoundarySegment::foot(const Vec2& p) const { return line_.foot_of(p); }

double BoundarySegment::distance(const Vec2& p) const {
  if (!extent_) return std::abs(line_.signed_distance(p));
  const Vec2 along = unit_vector(sweep_direction());
  const Vec2 f = foot(p);
  const double t = along.dot(f);
  const double tc = std::clamp(t, extent_->first, extent_->second);
  return (p - (f + (tc - t) * along)).norm();
}

Side BoundarySegment::side_of(const Vec2& p) const {
  return line_.signed_distance(p) >= 0.0 ? Side::B1 : Side::B2;
}

BoundaryChain chain_from_vertices(const std::vector<Vec2>& vertices) {
  if (vertices.size() < 2) throw ConstructionError("boundary chain needs at least two vertices");
  BoundaryChain chain;
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    chain.push_back(BoundarySegment::from_points(vertices[k], vertices[k + 1]));
  }
  return chain;
}

std::optional<Detection> detect_boundary(const BoundaryChain& chain, const Vec2& p, double range) {
  std::optional<Detection> best;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const double dist = chain[k].distance(p);
    if (dist <= range && (!best || dist < best->distance)) best = Detection{k, dist};
  }
  return best;
}

LineSpec moving_line(const BoundarySegment& boundary, double c0, std::size_t k,
                     const SwarmParams& params) {
  return LineSpec(boundary.sweep_direction(),
                  c0 + static_cast<double>(k) * params.period * params.sweep_speed);
}

SweepTargets sweep_targets(const LineSpec& line, const BoundarySegment& boundary, double d,
                           std::size_t n, Side side) {
  SweepTargets t;
  t.reference = line_intersection(line, boundary.line());
  t.side = side;
  const Vec2 u = unit_vector(boundary.gamma());
  const double sign = side == Side::B1 ? 1.0 : -1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    t.points.push_back(t.reference + (sign * d * static_cast<double>(i)) * u);
  }
  return t;
}

BarrierWeights boundary_weights(std::size_t participants, bool boundary_detected, bool weighted) {
  if (!boundary_detected || !weighted) {
    const double w = 1.0 / (1.0 + static_cast<double>(participants));
    std::vector<double> row(participants + 1, w);
    return {row, row};
  }
  if (participants == 2) {
    return {{2.0 / 6.0, 3.0 / 6.0, 1.0 / 6.0}, {2.0 / 6.0, 1.0 / 6.0, 3.0 / 6.0}};
  }
  if (participants == 1) {
    return {{1.0 / 3.0, 2.0 / 3.0}, {2.0 / 3.0, 1.0 / 3.0}};
  }
  throw PreconditionError("boundary_weights: a detecting robot has one or two barrier participants");
}

namespace {

// A neighbour taking part in a weighted average: a real robot or the virtual
// boundary robot.
struct Participant {
  Vec2 position;
  double coordination;
};

}  // namespace

std::vector<SweepControl> sweep_step(std::span<const SweepRobot> robots, const SwarmParams& params,
                                     const BoundaryChain& chain, bool weighted,
                                     std::vector<std::string>* warnings) {
  const std::size_t n = robots.size();
  std::vector<Vec2> pos;
  pos.reserve(n);
  for (const auto& r : robots) pos.push_back(r.position);
  const auto adj = build_adjacency(pos, params.comm_range);

  std::vector<std::optional<Detection>> det(n);
  std::vector<std::size_t> detectors;
  for (std::size_t i = 0; i < n; ++i) {
    det[i] = detect_boundary(chain, pos[i], params.boundary_range);
    if (det[i]) detectors.push_back(i);
  }
  std::sort(detectors.begin(), detectors.end(), [&](std::size_t a, std::size_t b) {
    if (det[a]->distance != det[b]->distance) return det[a]->distance < det[b]->distance;
    return a < b;
  });

  const double T = params.period;
  const double d = params.spacing;
  std::vector<SweepControl> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& self = robots[i];
    const auto nbrs = adj.neighbours(i);
    SweepControl& ctl = out[i];
    ctl.detection = det[i];

    std::vector<Participant> parts;
    const BoundarySegment* seg = nullptr;
    if (det[i]) {
      seg = &chain[det[i]->segment];
      const Vec2 foot = seg->foot(self.position);
      // classify neighbours in the frame of the current coordination variable
      const double qi = project_scalar(self.position, self.coordination);
      const double qb = project_scalar(foot, self.coordination);
      std::optional<std::size_t> near, far;
      double near_gap = std::numeric_limits<double>::infinity();
      double far_gap = std::numeric_limits<double>::infinity();
      for (auto j : nbrs) {
        const double qj = project_scalar(pos[j], self.coordination);
        const double s = (qj - qi) * (qb - qi);
        const double gap = std::abs(qj - qi);
        if (s > 0.0 && gap < near_gap) {
          near = j;
          near_gap = gap;
        } else if (s < 0.0 && gap < far_gap) {
          far = j;
          far_gap = gap;
        }
      }
      if (detectors.front() == i || !near) {
        parts.push_back({foot, seg->sweep_direction()});
      } else {
        parts.push_back({pos[*near], robots[*near].coordination});
      }
      if (far) parts.push_back({pos[*far], robots[*far].coordination});
    } else {
      for (auto j : nbrs) parts.push_back({pos[j], robots[j].coordination});
    }

    const auto w = boundary_weights(parts.size(), det[i].has_value(), weighted);
    double theta = w.heading[0] * self.coordination;
    for (std::size_t k = 0; k < parts.size(); ++k) theta += w.heading[k + 1] * parts[k].coordination;

    const Vec2 u_theta = unit_vector(theta);
    const double c_ii = self.position.dot(u_theta);
    double c_avg = w.velocity[0] * c_ii;
    for (std::size_t k = 0; k < parts.size(); ++k) c_avg += w.velocity[k + 1] * parts[k].position.dot(u_theta);

    const double qi = project_scalar(self.position, theta);
    std::optional<double> ql, qr;
    for (auto j : nbrs) {
      const double qj = project_scalar(pos[j], theta);
      if (qj < qi && (!ql || qj > *ql)) ql = qj;
      if (qj > qi && (!qr || qj < *qr)) qr = qj;
    }
    if (seg) {
      try {
        const Vec2 b = line_intersection(LineSpec(theta, c_avg), seg->line());
        const double qb = project_scalar(b, theta);
        if (qb <= qi) {
          ql = ql ? std::max(*ql, qb) : qb;
        } else {
          qr = qr ? std::min(*qr, qb) : qb;
        }
      } catch (const NoIntersection&) {
        // L_i parallel to B: no boundary projection this round
      }
    }
    double target = qi;
    if (ql && qr) {
      target = (*ql + *qr) / 2.0;
    } else if (ql) {
      target = (*ql + qi + d) / 2.0;
    } else if (qr) {
      target = (*qr + qi - d) / 2.0;
    }

    double vbar = (target - qi) / T;
    double vhat = (c_avg - c_ii + params.sweep_speed * T) / T;
    double v = std::hypot(vbar, vhat);
    if (v > params.speed) {
      const double s = params.speed / v;
      vbar *= s;
      vhat *= s;
      v = params.speed;
      ctl.clamped = true;
      if (warnings) {
        std::ostringstream os;
        os << "robot " << i << ": speed clamped to v_max";
        warnings->push_back(os.str());
      }
    }
    ctl.transverse = vbar;
    ctl.longitudinal = vhat;
    ctl.coordination = theta;
    ctl.speed = v;
    if (v == 0.0) {
      ctl.heading = self.heading;
    } else {
      const double beta = std::acos(std::clamp(vbar / v, -1.0, 1.0));
      ctl.heading = vhat >= 0.0 ? theta + beta - kPi / 2.0 : theta - beta - kPi / 2.0;
    }
  }
  return out;
}

std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost) {
  // Kuhn-Munkres with potentials, 1-based internally; rows <= cols.
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n > m) throw PreconditionError("min_cost_assignment: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> result(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) result[p[j] - 1] = j - 1;
  }
  return result;
}

double max_heading_error(std::span<const double> headings, double phi_b) {
  double worst = 0.0;
  for (double h : headings) worst = std::max(worst, std::abs(angle_diff(h, phi_b)));
  return worst;
}

TrackingReport tracking_report(std::span<const Vec2> positions, const BoundarySegment& boundary,
                               double d, Side side, std::optional<LineSpec> line) {
  const std::size_t n = positions.size();
  if (!line) {
    const Vec2 along = unit_vector(boundary.sweep_direction());
    double c = 0.0;
    for (const auto& p : positions) c += p.dot(along);
    line = LineSpec(boundary.sweep_direction(), n ? c / static_cast<double>(n) : 0.0);
  }
  TrackingReport r;
  r.targets = sweep_targets(*line, boundary, d, n, side);
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          distance(positions[i], r.targets.points[k]);
    }
  }
  r.assignment = min_cost_assignment(cost);
  for (std::size_t i = 0; i < n; ++i) {
    r.distances.push_back(distance(positions[i], r.targets.points[r.assignment[i]]));
    r.max_distance = std::max(r.max_distance, r.distances.back());
  }
  const Vec2 u = unit_vector(boundary.gamma());
  std::vector<double> coord;
  for (const auto& p : positions) coord.push_back(p.dot(u));
  std::sort(coord.begin(), coord.end());
  for (std::size_t k = 0; k + 1 < coord.size(); ++k) {
    r.spacings.push_back(coord[k + 1] - coord[k]);
    r.max_spacing_error = std::max(r.max_spacing_error, std::abs(r.spacings.back() - d));
  }
  return r;
}

}  // namespace swarmlab
