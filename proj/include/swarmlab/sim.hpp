#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "swarmlab/consensus.hpp"
#include "swarmlab/geometry.hpp"
#include "swarmlab/swarm_graph.hpp"
#include "swarmlab/sweep.hpp"

namespace swarmlab {

enum class Controller {
  simple,
  vicsek,
  similarity_weighted,
  quantized_biased,
  quantized_plain,
  sweep_equal,
  sweep_weighted,
};

std::string to_string(Controller c);
Controller parse_controller(const std::string& s);  // SchemaError on unknown names
bool is_quantized(Controller c);
bool is_sweep(Controller c);
// Controllers whose update is x' = W x.
bool is_linear(Controller c);

struct RobotState {
  std::size_t id = 0;
  Vec2 position;
  double heading = 0.0;  // radians

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

// Positions uniform in [lo, hi] (per axis), headings uniform in
// [heading_lo, heading_hi); quantized controllers draw grid indices
// floor(u M) instead.  Per robot the draw order is x, y, heading.  With
// require_connected the whole draw is repeated until the range graph is
// connected.
struct RandomInit {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  double heading_lo = 0.0;
  double heading_hi = kPi;
  bool require_connected = true;
  std::size_t max_attempts = 10000;

  friend bool operator==(const RandomInit&, const RandomInit&) = default;
};

// Robot i at center + r u(phase + 2π i / n).  Headings random as above when absent.
struct PolygonInit {
  double circumradius = 1.0;
  Vec2 center{0.0, 0.0};
  double phase = 0.0;
  std::optional<std::vector<double>> headings;

  friend bool operator==(const PolygonInit&, const PolygonInit&) = default;
};

using InitialSpec = std::variant<std::vector<RobotState>, RandomInit, PolygonInit>;

struct WeightOptions {
  bool guard = true;
  double guard_epsilon = kDefaultGuardEpsilon;

  friend bool operator==(const WeightOptions&, const WeightOptions&) = default;
};

// Boundary as explicit segments or as a vertex polyline (exactly one is used).
struct SegmentSpec {
  double gamma = 0.0;
  double offset = 0.0;
  std::optional<std::pair<double, double>> extent;

  friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

struct SweepSpec {
  std::vector<SegmentSpec> segments;
  std::vector<Vec2> vertices;
  Side side = Side::B1;
  std::optional<double> c0;  // sweep line offset at k = 0; fitted when absent

  BoundaryChain chain() const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct Scenario {
  std::string name;
  Controller controller = Controller::simple;
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000;
  double consensus_tol = 1e-4;
  SwarmParams params;
  InitialSpec initial = RandomInit{};
  std::optional<AdjacencyMatrix> adjacency;  // fixed graph overriding range adjacency
  WeightOptions weights;
  QuantBias bias = QuantBias::floor;
  std::optional<SweepSpec> sweep;
  bool record_weights = false;

  // Throws ScenarioError for combinations that cannot be simulated.
  void validate() const;
};

bool operator==(const Scenario& a, const Scenario& b);

struct SweepRecord {
  Vec2 target;
  double speed = 0.0;
  double heading = 0.0;
  double distance = 0.0;
};

struct SimTrace {
  std::vector<std::vector<RobotState>> steps;  // steps[0] is the initial state
  std::vector<WeightMatrix> weight_matrices;   // W_k used from step k to k+1
  std::vector<std::vector<SweepRecord>> sweep;  // per step k, per robot
  std::optional<std::size_t> consensus_step;
  bool cycle_detected = false;
  std::vector<std::string> warnings;
  int grid_steps = 0;  // M for quantized controllers, else 0
};

// Materializes the initial robot states (random draws use scenario.seed).
std::vector<RobotState> initial_states(const Scenario& scenario);

RobotState kinematics_step(const RobotState& state, double speed, double heading, double period);

// Largest pairwise heading difference: plain max - min for linear controllers,
// shortest angular distance otherwise.
double heading_spread(const std::vector<RobotState>& robots, bool circular);

SimTrace run(const Scenario& scenario);

// Revisit of an earlier joint heading vector (other than the immediately
// preceding one) in a trace that never reached consensus.  Quantized traces
// compare grid indices; others compare exact values.  Traces shorter than 4
// steps return false.
bool detect_cycle(const SimTrace& trace);

struct ComparisonRow {
  Controller controller;
  std::uint64_t seed;
  std::optional<std::size_t> consensus_step;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // controller-major, seeds ascending
  // Median consensus step per controller (non-converged runs count as
  // max_steps + 1); same order as the controller list.
  std::vector<std::pair<Controller, double>> medians;
};

// Runs seeds first_seed .. first_seed + n_seeds - 1 for every controller on
// `threads` workers (0: hardware concurrency); the result does not depend on
// the thread count.
ComparisonTable compare_controllers(const Scenario& scenario, const std::vector<Controller>& controllers,
                                    std::size_t n_seeds, std::optional<std::uint64_t> first_seed = std::nullopt,
                                    unsigned threads = 0);

void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_sweep_csv(std::ostream& out, const SimTrace& trace);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
nlohmann::json summary_json(const SimTrace& trace);

}  // namespace swarmlab
