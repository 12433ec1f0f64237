#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swarmlab/geometry.hpp"
#include "swarmlab/swarm_graph.hpp"

namespace swarmlab {

// Half-plane of the barrier: B1 is u(γ)ᵀp >= b1, B2 the other side.
enum class Side { B1, B2 };
std::string to_string(Side s);
Side parse_side(const std::string& s);

// Boundary line uᵀp = b1 with u = u(γ), swept along φ_b = γ + π/2.  An optional
// extent [t0, t1] of the along-line coordinate u(φ_b)ᵀp bounds the segment.
class BoundarySegment {
 public:
  BoundarySegment(double gamma, double offset,
                  std::optional<std::pair<double, double>> extent = std::nullopt);
  // Segment from a to b, swept in the direction a -> b.
  static BoundarySegment from_points(const Vec2& a, const Vec2& b);

  const LineSpec& line() const noexcept { return line_; }
  double gamma() const noexcept { return gamma_; }
  double sweep_direction() const noexcept { return gamma_ + kPi / 2.0; }
  const std::optional<std::pair<double, double>>& extent() const noexcept { return extent_; }

  double distance(const Vec2& p) const;  // to the segment (or full line)
  Vec2 foot(const Vec2& p) const;        // orthogonal foot on the full line
  Side side_of(const Vec2& p) const;

 private:
  double gamma_;
  LineSpec line_;
  std::optional<std::pair<double, double>> extent_;
};

using BoundaryChain = std::vector<BoundarySegment>;

// Polyline through `vertices`, swept from the first vertex toward the last.
BoundaryChain chain_from_vertices(const std::vector<Vec2>& vertices);

struct Detection {
  std::size_t segment = 0;
  double distance = 0.0;
};
// Nearest segment within `range` (ties: lowest index).
std::optional<Detection> detect_boundary(const BoundaryChain& chain, const Vec2& p, double range);

// L0(kT): u(φ_b)ᵀp = c0 + kT v0.
LineSpec moving_line(const BoundarySegment& boundary, double c0, std::size_t k, const SwarmParams& params);

struct SweepTargets {
  Vec2 reference;            // p_b = L0 ∩ B
  std::vector<Vec2> points;  // p_1..p_n
  Side side = Side::B1;
};

// p_i = p_b ± d i u(γ).  Throws NoIntersection when L0 is parallel to B.
SweepTargets sweep_targets(const LineSpec& line, const BoundarySegment& boundary, double d,
                           std::size_t n, Side side);

// Weight rows for the barrier-local rule, ordered [self, near, far] where near
// is the participant on the boundary side (the virtual robot when nothing real
// sits between robot and boundary).  Without detection all weights are
// 1/(1 + participants).  `weighted = false` forces equal weights throughout.
struct BarrierWeights {
  std::vector<double> heading;
  std::vector<double> velocity;
};
BarrierWeights boundary_weights(std::size_t participants, bool boundary_detected, bool weighted = true);

struct SweepRobot {
  Vec2 position;
  double coordination = 0.0;  // φ_i
  double heading = 0.0;       // θ_i, held when the commanded speed is zero
};

struct SweepControl {
  double speed = 0.0;         // v_i
  double heading = 0.0;       // θ_i
  double coordination = 0.0;  // Θ_i, the next φ_i
  double transverse = 0.0;    // v̄_i
  double longitudinal = 0.0;  // v̂_i
  std::optional<Detection> detection;
  bool clamped = false;
};

// One synchronous round of the boundary-following controller.  Speed clamps
// append a warning to `warnings` when given.
std::vector<SweepControl> sweep_step(std::span<const SweepRobot> robots, const SwarmParams& params,
                                     const BoundaryChain& chain, bool weighted,
                                     std::vector<std::string>* warnings = nullptr);

// Minimum-cost assignment (Hungarian).  result[row] = column.
std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost);

double max_heading_error(std::span<const double> headings, double phi_b);

struct TrackingReport {
  SweepTargets targets;
  std::vector<std::size_t> assignment;  // robot -> target index
  std::vector<double> distances;        // robot -> assigned target
  std::vector<double> spacings;         // consecutive robots along u(γ)
  double max_distance = 0.0;
  double max_spacing_error = 0.0;
};

// Targets on the given sweep line (or on the fitted one, c̄0 = mean s_iᵀu(φ_b),
// when `line` is empty), matched to robots by minimum total distance.
TrackingReport tracking_report(std::span<const Vec2> positions, const BoundarySegment& boundary,
                               double d, Side side, std::optional<LineSpec> line = std::nullopt);

}  // namespace swarmlab
