#include "swarmlab/geometry.hpp"

#include <string>

#include "swarmlab/errors.hpp"

namespace swarmlab {

Vec2::Vec2(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw ConstructionError("Vec2 components must be finite");
  }
}

double distance(const Vec2& a, const Vec2& b) noexcept {
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

double wrap_two_pi(double angle) noexcept {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2π
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_diff(double a, double b) noexcept {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

Vec2 unit_vector(double gamma) {
  if (!std::isfinite(gamma)) throw ConstructionError("unit_vector: angle must be finite");
  return {std::cos(gamma), std::sin(gamma)};
}

double project_scalar(const Vec2& point, double theta) noexcept {
  return std::sin(theta) * point.x() - std::cos(theta) * point.y();
}

LineSpec::LineSpec(double normal_angle, double offset)
    : angle_(wrap_two_pi(normal_angle)), offset_(offset) {
  if (!std::isfinite(normal_angle) || !std::isfinite(offset)) {
    throw ConstructionError("LineSpec: angle and offset must be finite");
  }
}

LineSpec LineSpec::through(const Vec2& point, double direction) {
  const double normal = direction - kPi / 2.0;
  return {normal, unit_vector(normal).dot(point)};
}

double LineSpec::signed_distance(const Vec2& p) const { return normal().dot(p) - offset_; }

Vec2 LineSpec::foot_of(const Vec2& p) const { return p - signed_distance(p) * normal(); }

Vec2 line_intersection(const LineSpec& a, const LineSpec& b) {
  const double det = std::sin(b.angle() - a.angle());
  if (std::abs(det) <= kParallelTolerance) {
    throw NoIntersection("line_intersection: lines are parallel");
  }
  // [cos a  sin a; cos b  sin b] p = [ca; cb], Cramer's rule
  const double ca = std::cos(a.angle()), sa = std::sin(a.angle());
  const double cb = std::cos(b.angle()), sb = std::sin(b.angle());
  const double x = (a.offset() * sb - sa * b.offset()) / det;
  const double y = (ca * b.offset() - a.offset() * cb) / det;
  return {x, y};
}

}  // namespace swarmlab
