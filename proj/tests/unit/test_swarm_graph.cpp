#include <gtest/gtest.h>

#include "oracles.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/swarm_graph.hpp"

using namespace swarmlab;

namespace {

const std::vector<std::vector<int>> kBridgedCliques = {
    {0, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0}, {1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 1}, {1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0},
    {1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1},
    {0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1}, {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 1}, {0, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0},
};

WeightMatrix perm2() { return WeightMatrix::from_rows({{0, 1}, {1, 0}}); }

}  // namespace

TEST(BuildAdjacency, RangeExamples) {
  const std::vector<Vec2> close{{0, 0}, {1, 0}};
  EXPECT_EQ(build_adjacency(close, 1.4).rows(), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
  const std::vector<Vec2> far{{0, 0}, {2, 0}};
  EXPECT_EQ(build_adjacency(far, 1.4).rows(), (std::vector<std::vector<int>>{{0, 0}, {0, 0}}));
  const std::vector<Vec2> line{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_EQ(build_adjacency(line, 1.4).rows(), (std::vector<std::vector<int>>{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
}

TEST(BuildAdjacency, TieIsNeighbour) {
  const std::vector<Vec2> p{{0, 0}, {1.5, 0}};
  EXPECT_TRUE(build_adjacency(p, 1.5)(0, 1));
}

TEST(BuildAdjacency, SymmetricZeroDiagonalProperty) {
  oracle::Gen g(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + g.below(15);
    const auto pts = g.points(n, 5.0);
    const double rc = g.uniform(0.1, 3.0);
    const auto a = build_adjacency(pts, rc);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_FALSE(a(i, i));
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_EQ(a(i, j), a(j, i));
        if (i != j) ASSERT_EQ(a(i, j), distance(pts[i], pts[j]) <= rc);
      }
    }
  }
}

TEST(AdjacencyMatrix, FromRowsValidates) {
  EXPECT_THROW(AdjacencyMatrix::from_rows({{0, 1}, {0, 0}}), PreconditionError);
  EXPECT_THROW(AdjacencyMatrix::from_rows({{1, 0}, {0, 0}}), PreconditionError);
  EXPECT_THROW(AdjacencyMatrix::from_rows({{0, 2}, {2, 0}}), PreconditionError);
  EXPECT_THROW(AdjacencyMatrix::from_rows({{0, 1}}), PreconditionError);
}

TEST(IsConnected, Examples) {
  EXPECT_TRUE(is_connected(AdjacencyMatrix::from_rows({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}})));
  EXPECT_FALSE(is_connected(AdjacencyMatrix::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}})));
  EXPECT_TRUE(is_connected(AdjacencyMatrix::from_rows(kBridgedCliques)));
  EXPECT_TRUE(is_connected(AdjacencyMatrix(1)));
}

TEST(IsIrreducible, Examples) {
  EXPECT_TRUE(is_irreducible(perm2()));
  EXPECT_FALSE(is_irreducible(WeightMatrix::identity(2)));
  EXPECT_FALSE(is_irreducible(WeightMatrix::from_rows({{1, 0, 0}, {0.5, 0.5, 0}, {0, 0.5, 0.5}})));
}

TEST(IsIrreducible, AgreesWithBooleanPowerOracle) {
  oracle::Gen g(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + g.below(6);
    const WeightMatrix w(g.stochastic(n, g.uniform(0.1, 0.7)));
    ASSERT_EQ(is_irreducible(w), oracle::strongly_connected_by_powers(w.matrix())) << w.matrix();
  }
}

TEST(IsAperiodic, Examples) {
  EXPECT_FALSE(is_aperiodic(perm2()));
  EXPECT_TRUE(is_aperiodic(WeightMatrix::from_rows({{0.2, 0.8}, {1, 0}})));
  EXPECT_FALSE(is_aperiodic(WeightMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})));
  EXPECT_EQ(period(WeightMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})), 3u);
  EXPECT_THROW(is_aperiodic(WeightMatrix::identity(2)), PreconditionError);
}

TEST(IsAperiodic, TriangleWithTailIsAperiodic) {
  // cycles of length 2 and 3
  const auto w = WeightMatrix::from_rows({{0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}});
  EXPECT_TRUE(is_aperiodic(w));
}

TEST(IsAperiodic, FastPathNeverContradictsCycleGcd) {
  oracle::Gen g(23);
  int irreducible = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 2 + g.below(6);
    Eigen::MatrixXd m = g.stochastic(n, g.uniform(0.15, 0.6));
    if (g.coin(0.7)) {
      // zero the diagonal so the gcd path is exercised
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, i) = 0.0;
        if (m.row(i).sum() == 0.0) m(i, (i + 1) % m.cols()) = 1.0;
        m.row(i) /= m.row(i).sum();
        Eigen::Index k = 0;
        m.row(i).maxCoeff(&k);
        m(i, k) += 1.0 - m.row(i).sum();
      }
    }
    const WeightMatrix w(m, 1e-12);
    if (!is_irreducible(w)) continue;
    ++irreducible;
    const std::size_t p = oracle::period_by_powers(m);
    ASSERT_EQ(period(w), p) << m;
    ASSERT_EQ(is_aperiodic(w), p == 1) << m;
    if (w.has_positive_diagonal()) ASSERT_EQ(p, 1u);
  }
  EXPECT_GT(irreducible, 300);
}

TEST(SwarmParams, Validation) {
  SwarmParams p;
  EXPECT_NO_THROW(p.validate());
  p.steps_per_rev = 3;
  EXPECT_THROW(p.validate(), ScenarioError);
  p = SwarmParams{};
  p.comm_range = 0.0;
  EXPECT_THROW(p.validate(), ScenarioError);
  p = SwarmParams{};
  p.period = -1.0;
  EXPECT_THROW(p.validate(), ScenarioError);
}

TEST(SwarmParams, SweepAssumptionWarnings) {
  SwarmParams p;
  p.n = 6;
  p.comm_range = 1.0;
  p.sense_range = 0.9;
  p.boundary_range = 2.0;
  p.speed = 5.0;
  p.period = 1.0;
  p.sweep_speed = 0.05;
  p.barrier_length = 5.0;
  EXPECT_TRUE(p.sweep_assumption_warnings().empty());
  p.barrier_length = 7.0;  // (n+1) R_s = 6.3
  ASSERT_EQ(p.sweep_assumption_warnings().size(), 1u);
  EXPECT_NE(p.sweep_assumption_warnings()[0].find("(n+1)"), std::string::npos);
  p.barrier_length.reset();
  p.boundary_range = 1.2;
  EXPECT_FALSE(p.sweep_assumption_warnings().empty());
}
