#pragma once

#include <cmath>

namespace swarmlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Planar point or displacement, in meters.  Components are always finite.
class Vec2 {
 public:
  constexpr Vec2() = default;
  Vec2(double x, double y);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

  double dot(const Vec2& o) const noexcept { return x_ * o.x_ + y_ * o.y_; }
  double norm() const noexcept { return std::hypot(x_, y_); }

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x_ + b.x_, a.y_ + b.y_}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x_ - b.x_, a.y_ - b.y_}; }
  friend Vec2 operator*(double s, const Vec2& a) { return {s * a.x_, s * a.y_}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

double distance(const Vec2& a, const Vec2& b) noexcept;

// Wraps an angle into [0, 2π).
double wrap_two_pi(double angle) noexcept;

// Shortest signed difference a - b, in (-π, π].
double angle_diff(double a, double b) noexcept;

// u(γ) = (cos γ, sin γ).  Throws ConstructionError for non-finite γ.
Vec2 unit_vector(double gamma);

// [sin θ, -cos θ]·p: the signed coordinate of p along a line whose normal is u(θ).
double project_scalar(const Vec2& point, double theta) noexcept;

// The line {p : u(angle)ᵀp = offset}.  `angle` is the direction of the unit
// normal and is kept in [0, 2π).
class LineSpec {
 public:
  LineSpec(double normal_angle, double offset);

  // Builds the line through `point` whose along-direction is `direction`.
  static LineSpec through(const Vec2& point, double direction);

  double angle() const noexcept { return angle_; }
  double offset() const noexcept { return offset_; }
  Vec2 normal() const { return unit_vector(angle_); }

  // uᵀp - offset; zero on the line.
  double signed_distance(const Vec2& p) const;
  Vec2 foot_of(const Vec2& p) const;

 private:
  double angle_;
  double offset_;
};

// Solves the 2x2 system of both line equations.  Throws NoIntersection when
// |sin(angle_a - angle_b)| <= 1e-12.
Vec2 line_intersection(const LineSpec& a, const LineSpec& b);

inline constexpr double kParallelTolerance = 1e-12;

}  // namespace swarmlab
