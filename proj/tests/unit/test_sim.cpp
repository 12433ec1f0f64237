#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/scenario_io.hpp"
#include "swarmlab/sim.hpp"

using namespace swarmlab;

namespace {

Scenario scenario(const std::string& file) { return load_scenario(std::string(SCENARIO_DIR) + "/" + file); }

Scenario two_robot(Controller c, double h0, double h1) {
  Scenario s;
  s.controller = c;
  s.params.n = 2;
  s.params.comm_range = 5.0;
  s.params.speed = 0.1;
  s.params.period = 0.1;
  s.initial = std::vector<RobotState>{{0, Vec2(0, 0), h0}, {1, Vec2(1, 0), h1}};
  s.max_steps = 50;
  return s;
}

}  // namespace

TEST(Kinematics, StepsAlongHeading) {
  const RobotState r{3, Vec2(1, 2), 0.0};
  const auto n = kinematics_step(r, 2.0, kPi / 2, 0.5);
  EXPECT_EQ(n.id, 3u);
  EXPECT_NEAR(n.position.x(), 1.0, 1e-15);
  EXPECT_NEAR(n.position.y(), 3.0, 1e-15);
  EXPECT_EQ(n.heading, kPi / 2);
}

TEST(HeadingSpread, LinearAndCircular) {
  const std::vector<RobotState> r{{0, Vec2(), 0.1}, {1, Vec2(), kTwoPi - 0.1}};
  EXPECT_NEAR(heading_spread(r, false), kTwoPi - 0.2, 1e-12);
  EXPECT_NEAR(heading_spread(r, true), 0.2, 1e-12);
}

TEST(Run, SingleRobotIsImmediatelyInConsensus) {
  Scenario s;
  s.params.n = 1;
  s.initial = std::vector<RobotState>{{0, Vec2(0, 0), 1.0}};
  const auto t = run(s);
  ASSERT_TRUE(t.consensus_step);
  EXPECT_EQ(*t.consensus_step, 0u);
  EXPECT_EQ(t.steps.size(), 1u);
}

TEST(Run, CompleteGraphAgreesInOneStep) {
  const auto t = run(scenario("example3_complete_graph.json"));
  ASSERT_TRUE(t.consensus_step);
  EXPECT_EQ(*t.consensus_step, 1u);
  double mean = 0;
  for (const auto& r : t.steps[0]) mean += r.heading;
  mean /= static_cast<double>(t.steps[0].size());
  for (const auto& r : t.steps[1]) EXPECT_NEAR(r.heading, mean, 1e-12);
}

TEST(Run, MovesWithTheOldHeading) {
  const auto t = run(two_robot(Controller::simple, 0.0, 1.0));
  EXPECT_NEAR(t.steps[1][0].position.x(), 0.01, 1e-15);
  EXPECT_NEAR(t.steps[1][0].position.y(), 0.0, 1e-15);
  EXPECT_NEAR(t.steps[1][0].heading, 0.5, 1e-15);
}

TEST(Run, DeterministicForASeed) {
  auto s = scenario("example2_bridged_cliques.json");
  std::ostringstream a, b;
  write_trace_csv(a, run(s));
  write_trace_csv(b, run(s));
  EXPECT_EQ(a.str(), b.str());
  s.seed += 1;
  std::ostringstream c;
  write_trace_csv(c, run(s));
  EXPECT_NE(a.str(), c.str());
}

TEST(Run, RejectsDisconnectedStart) {
  auto s = two_robot(Controller::simple, 0.1, 0.2);
  s.params.comm_range = 0.5;
  EXPECT_THROW(run(s), ScenarioError);
}

TEST(Run, RejectsHeadingsOutsideHalfPlaneForLinearControllers) {
  EXPECT_THROW(run(two_robot(Controller::simple, 0.1, 4.0)), ScenarioError);
  EXPECT_NO_THROW(run(two_robot(Controller::vicsek, 0.1, 4.0)));
}

TEST(Run, HeadingRangeNeverGrowsUnderAveraging) {
  for (auto c : {Controller::simple, Controller::similarity_weighted}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto s = scenario("example2_bridged_cliques.json");
      s.controller = c;
      s.seed = seed;
      s.max_steps = 300;
      const auto t = run(s);
      double prev = heading_spread(t.steps[0], false);
      for (const auto& st : t.steps) {
        const double cur = heading_spread(st, false);
        ASSERT_LE(cur, prev + 1e-12) << to_string(c) << " seed " << seed;
        prev = cur;
      }
    }
  }
}

TEST(Cycles, UnguardedSimilaritySwapsTwoRobotsForever) {
  auto s = two_robot(Controller::similarity_weighted, 0.5, 1.0);
  s.weights.guard = false;
  const auto t = run(s);
  EXPECT_FALSE(t.consensus_step);
  EXPECT_TRUE(t.cycle_detected);
  EXPECT_EQ(t.steps[1][0].heading, 1.0);
  EXPECT_EQ(t.steps[1][1].heading, 0.5);

  s.weights.guard = true;
  s.max_steps = 2000;  // slem 0.99
  const auto g = run(s);
  EXPECT_TRUE(g.consensus_step);
  EXPECT_FALSE(g.cycle_detected);
}

TEST(Cycles, FloorQuantizedPolygonCyclesAndBiasedRuleAgrees) {
  const auto plain = run(scenario("polygon_plain_cycle.json"));
  EXPECT_FALSE(plain.consensus_step);
  EXPECT_TRUE(plain.cycle_detected);

  auto biased = scenario("polygon_plain_cycle.json");
  biased.controller = Controller::quantized_biased;
  const auto b = run(biased);
  ASSERT_TRUE(b.consensus_step);
  EXPECT_FALSE(b.cycle_detected);
  const QuantizationGrid grid(20);
  for (const auto& st : b.steps)
    for (const auto& r : st) ASSERT_TRUE(grid.contains(r.heading));
}

TEST(Cycles, DetectorCases) {
  SimTrace t;
  auto state = [](double a, double b) { return std::vector<RobotState>{{0, Vec2(), a}, {1, Vec2(), b}}; };
  t.steps = {state(1, 2), state(2, 1), state(1, 2)};
  EXPECT_FALSE(detect_cycle(t));  // too short
  t.steps.push_back(state(2, 1));
  EXPECT_TRUE(detect_cycle(t));
  t.consensus_step = 3;
  EXPECT_FALSE(detect_cycle(t));
  t.consensus_step.reset();
  t.steps = {state(1, 2), state(1.5, 1.5), state(1.5, 1.5), state(1.5, 1.5)};
  EXPECT_FALSE(detect_cycle(t));  // a stationary state is not a cycle
}

TEST(Sweep, StraightBoundaryFormationConverges) {
  const auto s = scenario("sweep_straight.json");
  const auto t = run(s);
  ASSERT_FALSE(t.sweep.empty());
  double worst = 0;
  for (const auto& r : t.sweep.back()) worst = std::max(worst, r.distance);
  EXPECT_LT(worst, 1e-6);
  for (const auto& r : t.steps.back()) EXPECT_NEAR(angle_diff(r.heading, kPi / 2), 0.0, 1e-6);
}

TEST(Compare, IndependentOfThreadCount) {
  const auto s = scenario("example2_bridged_cliques.json");
  const std::vector<Controller> cs{Controller::similarity_weighted, Controller::simple};
  const auto a = compare_controllers(s, cs, 6, 0, 1);
  const auto b = compare_controllers(s, cs, 6, 0, 3);
  ASSERT_EQ(a.rows.size(), 12u);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].controller, b.rows[k].controller);
    EXPECT_EQ(a.rows[k].seed, b.rows[k].seed);
    EXPECT_EQ(a.rows[k].consensus_step, b.rows[k].consensus_step);
  }
  EXPECT_EQ(a.medians, b.medians);
  std::ostringstream os;
  write_comparison_csv(os, a);
  EXPECT_NE(os.str().find("similarity"), std::string::npos);
}

TEST(Summary, HasConsensusFields) {
  const auto j = summary_json(run(scenario("example3_complete_graph.json")));
  EXPECT_EQ(j.at("consensus_step").get<int>(), 1);
  EXPECT_FALSE(j.at("cycle_detected").get<bool>());
}
