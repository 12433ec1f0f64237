#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "swarmlab/consensus.hpp"
#include "swarmlab/errors.hpp"

using namespace swarmlab;

namespace {

using V = std::vector<double>;

AdjacencyMatrix path3() { return AdjacencyMatrix::from_rows({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}); }
AdjacencyMatrix k3() { return AdjacencyMatrix::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}); }

}  // namespace

TEST(Vicsek, Examples) {
  EXPECT_DOUBLE_EQ(vicsek_update(0.0, V{}), 0.0);
  EXPECT_NEAR(vicsek_update(0.0, V{kPi / 2}), kPi / 4, 1e-15);
  EXPECT_THROW(vicsek_update(0.0, V{kPi}), DegenerateAverage);
}

TEST(Vicsek, WrapsIntoZeroTwoPi) {
  const double out = vicsek_update(-0.1, V{-0.2});
  EXPECT_NEAR(out, kTwoPi - 0.15, 1e-12);
}

TEST(SimpleAverage, Examples) {
  EXPECT_DOUBLE_EQ(simple_average_update(0.4, V{}), 0.4);
  EXPECT_NEAR(simple_average_update(0.0, V{kPi / 2}), kPi / 4, 1e-15);
  EXPECT_NEAR(simple_average_update(0.1, V{0.2, 0.3}), 0.2, 1e-15);
}

TEST(SimpleAverage, NoWrapping) {
  EXPECT_NEAR(simple_average_update(0.1, V{6.2}), 3.15, 1e-12);
}

TEST(WeightedAverage, Examples) {
  const double third = 1.0 / 3.0;
  EXPECT_EQ(weighted_average_update(0.1, V{0.2, 0.3}, V{third, third, third}),
            simple_average_update(0.1, V{0.2, 0.3}));
  // self 2/6, boundary-side 3/6, far 1/6
  EXPECT_NEAR(weighted_average_update(0.0, V{kPi / 2, 0.0}, V{2.0 / 6, 3.0 / 6, 1.0 / 6}), kPi / 4, 1e-15);
  EXPECT_EQ(weighted_average_update(1.7, V{}, V{1.0}), 1.7);
}

TEST(WeightedAverage, RejectsBadRows) {
  EXPECT_THROW(weighted_average_update(0.0, V{1.0}, V{0.5, 0.6}), InvalidWeights);
  EXPECT_THROW(weighted_average_update(0.0, V{1.0}, V{1.5, -0.5}), InvalidWeights);
  EXPECT_THROW(weighted_average_update(0.0, V{1.0}, V{1.0}), InvalidWeights);
  try {
    weighted_average_update(0.0, V{1.0}, V{0.5, 0.7});
  } catch (const InvalidWeights& e) {
    EXPECT_NEAR(e.max_row_deviation(), 0.2, 1e-12);
  }
}

TEST(WeightedAverage, EqualWeightsReduceToSimpleBitForBit) {
  oracle::Gen g(31);
  for (int k = 0; k < 10000; ++k) {
    const std::size_t m = g.below(12);
    V nb(m);
    for (auto& x : nb) x = g.uniform(0.0, kPi);
    const double self = g.uniform(0.0, kPi);
    const V w(m + 1, 1.0 / (1.0 + static_cast<double>(m)));
    if (std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) > kRowSumTolerance) continue;
    ASSERT_EQ(weighted_average_update(self, nb, w), simple_average_update(self, nb));
  }
}

TEST(Averages, ConvexHullContainment) {
  oracle::Gen g(32);
  for (int k = 0; k < 5000; ++k) {
    const std::size_t m = g.below(10);
    V nb(m);
    for (auto& x : nb) x = g.uniform(-5.0, 5.0);
    const double self = g.uniform(-5.0, 5.0);
    V w(m + 1);
    for (auto& x : w) x = g.uniform();
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
    w[0] += 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
    double lo = self, hi = self;
    for (double x : nb) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double a = simple_average_update(self, nb);
    ASSERT_GE(a, lo - 1e-12);
    ASSERT_LE(a, hi + 1e-12);
    const double b = weighted_average_update(self, nb, w);
    ASSERT_GE(b, lo - 1e-12);
    ASSERT_LE(b, hi + 1e-12);
  }
}

TEST(ApplyWeights, MatchesRowWiseKernel) {
  const auto a = path3();
  const auto w = equal_weight_matrix(a);
  const V x{0.3, 1.1, 2.9};
  const auto y = apply_weights(w, x);
  EXPECT_EQ(y[0], simple_average_update(0.3, V{1.1}));
  EXPECT_EQ(y[1], simple_average_update(1.1, V{0.3, 2.9}));
  EXPECT_EQ(y[2], simple_average_update(2.9, V{1.1}));
}

TEST(CosineSimilarity, Examples) {
  const std::vector<int> r{1, 0, 1, 1};
  EXPECT_DOUBLE_EQ(cosine_similarity(r, r), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<int>{0, 1, 0}, std::vector<int>{1, 0, 1}), 0.0);
  EXPECT_NEAR(cosine_similarity(std::vector<int>{1, 1, 0}, std::vector<int>{1, 0, 1}), 0.5, 1e-15);
  EXPECT_THROW(cosine_similarity(std::vector<int>{0, 0, 0}, std::vector<int>{1, 0, 1}), IsolatedNode);
}

TEST(CosineSimilarity, SymmetricExactly) {
  oracle::Gen g(33);
  for (int k = 0; k < 500; ++k) {
    const auto a = g.connected_graph(2 + g.below(12), 0.4);
    const auto rows = a.rows();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) ASSERT_EQ(cosine_similarity(rows[i], rows[j]), cosine_similarity(rows[j], rows[i]));
  }
}

TEST(SimilarityWeights, Examples) {
  const auto mid = similarity_weights(path3(), 1);
  EXPECT_EQ(mid, (V{0.5, 0.0, 0.5}));
  const auto end = similarity_weights(path3(), 0);
  EXPECT_EQ(end, (V{0.0, 1.0, 0.0}));
  const auto tri = similarity_weights(k3(), 0);
  EXPECT_NEAR(tri[1], 0.5, 1e-15);
  EXPECT_NEAR(tri[2], 0.5, 1e-15);
  EXPECT_EQ(tri[0], 0.0);
  EXPECT_THROW(similarity_weights(AdjacencyMatrix(2), 0), IsolatedNode);
}

TEST(SimilarityWeights, RowsStochasticOnClosedNeighbourhood) {
  oracle::Gen g(34);
  for (int k = 0; k < 1000; ++k) {
    const auto a = g.connected_graph(2 + g.below(19), g.uniform(0.1, 0.8));
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto row = similarity_weights(a, i);
      ASSERT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
      for (std::size_t j = 0; j < a.size(); ++j) {
        ASSERT_GE(row[j], 0.0);
        if (j != i && !a(i, j)) ASSERT_EQ(row[j], 0.0);
      }
    }
    EXPECT_NO_THROW(similarity_matrix(a));
  }
}

TEST(SimilarityMatrix, IsolatedHoldOption) {
  AdjacencyMatrix a(3);
  a.connect(0, 1);
  EXPECT_THROW(similarity_matrix(a), IsolatedNode);
  const auto w = similarity_matrix(a, true);
  EXPECT_EQ(w(2, 2), 1.0);
}

TEST(AperiodicityGuard, Examples) {
  const auto p = apply_aperiodicity_guard(WeightMatrix::from_rows({{0, 1}, {1, 0}}), 0.01);
  EXPECT_EQ(p(0, 0), 0.01);
  EXPECT_EQ(p(0, 1), 0.99);
  EXPECT_EQ(p(1, 0), 1.0);
  EXPECT_EQ(p(1, 1), 0.0);

  const auto keep = WeightMatrix::from_rows({{0.3, 0.7}, {1, 0}});
  EXPECT_EQ(apply_aperiodicity_guard(keep, 0.01).matrix(), keep.matrix());

  const auto g = apply_aperiodicity_guard(similarity_matrix(path3()), 0.01);
  EXPECT_EQ(g(0, 0), 0.01);
  EXPECT_EQ(g(0, 1), 0.99);
  EXPECT_EQ(g(0, 2), 0.0);
  EXPECT_THROW(apply_aperiodicity_guard(keep, 1.0), PreconditionError);
}

TEST(QuantizationGrid, Basics) {
  const QuantizationGrid grid(20);
  EXPECT_DOUBLE_EQ(grid.step_size(), kTwoPi / 20);
  EXPECT_EQ(grid.index_of(grid.value(7)), 7);
  EXPECT_EQ(grid.index_of(grid.value(7) + kTwoPi), 7);
  EXPECT_EQ(grid.value(-1), grid.value(19));
  EXPECT_THROW(grid.index_of(0.1), PreconditionError);
  EXPECT_THROW(QuantizationGrid(3), PreconditionError);
}

TEST(QuantizedDelta, Examples) {
  const QuantizationGrid grid(20);
  const double Q = grid.step_size();
  EXPECT_NEAR(quantized_delta(Q, V{Q}, grid), 0.0, 1e-12);
  EXPECT_NEAR(quantized_delta(2 * Q, V{Q, Q}, grid), 1.0, 1e-12);
  EXPECT_NEAR(quantized_delta(0.0, V{3 * Q}, grid), -3.0, 1e-12);
  EXPECT_THROW(quantized_delta(0.0, V{}, grid), NoNeighbours);
}

TEST(QuantizedUpdate, Examples) {
  const QuantizationGrid grid(20);
  const double Q = grid.step_size();
  EXPECT_EQ(quantized_update(5 * Q, V{5 * Q, 5 * Q}, grid), grid.value(5));
  EXPECT_EQ(quantized_update(2 * Q, V{Q, Q}, grid, QuantBias::floor), grid.value(1));
  EXPECT_EQ(quantized_update(4 * Q, V{0, 0}, grid), grid.value(1));
  EXPECT_EQ(quantized_update(3 * Q, V{}, grid), grid.value(3));
}

TEST(QuantizedUpdate, OneSidedBias) {
  // below the neighbour mean: floor bias holds, ceil bias snaps up
  EXPECT_EQ(quantized_update_index(1, std::vector<int>{2}, 20, QuantBias::floor), 1);
  EXPECT_EQ(quantized_update_index(1, std::vector<int>{2}, 20, QuantBias::ceil), 2);
  // above: floor snaps down, ceil holds
  EXPECT_EQ(quantized_update_index(2, std::vector<int>{1}, 20, QuantBias::floor), 1);
  EXPECT_EQ(quantized_update_index(2, std::vector<int>{1}, 20, QuantBias::ceil), 2);
  // fractional neighbour mean 1.5, self 2: floor gives min(2, 1) = 1
  EXPECT_EQ(quantized_update_index(2, std::vector<int>{1, 2}, 20, QuantBias::floor), 1);
}

TEST(QuantizedUpdate, ClosedOverGridExhaustive) {
  const QuantizationGrid grid(20);
  for (int s = 0; s < 20; ++s) {
    for (int n = 0; n < 20; ++n) {
      for (auto bias : {QuantBias::floor, QuantBias::ceil}) {
        const double out = quantized_update(grid.value(s), V{grid.value(n)}, grid, bias);
        const int k = grid.index_of(out);
        ASSERT_EQ(out, grid.value(k));
        ASSERT_GE(out, 0.0);
        ASSERT_LT(out, kTwoPi);
      }
    }
  }
}

TEST(QuantizedUpdate, TwoRobotsNeverSwap) {
  // The literal floor/ceil reading swaps adjacent levels forever; the
  // one-sided rule must meet in one step.
  for (int a = 0; a < 20; ++a) {
    const int b = (a + 1) % 20;
    if (b == 0) continue;
    const int na = quantized_update_index(a, std::vector<int>{b}, 20, QuantBias::floor);
    const int nb = quantized_update_index(b, std::vector<int>{a}, 20, QuantBias::floor);
    EXPECT_EQ(na, nb) << a;
  }
}

TEST(QuantizedVicsek, FloorsTheVectorAverage) {
  const QuantizationGrid grid(20);
  EXPECT_EQ(quantized_vicsek_index(0, std::vector<int>{1}, grid), 0);
  EXPECT_EQ(quantized_vicsek_index(1, std::vector<int>{1}, grid), 1);
  EXPECT_EQ(quantized_vicsek_index(0, std::vector<int>{2}, grid), 1);
  EXPECT_EQ(quantized_vicsek_index(0, std::vector<int>{10}, grid), 0);  // degenerate: hold
  EXPECT_EQ(quantized_vicsek_index(19, std::vector<int>{1}, grid), 0);
}

TEST(HeadingState, Validation) {
  HeadingState h{{0.1, 0.2}, {0.1, 0.2}};
  EXPECT_NO_THROW(h.validate());
  EXPECT_TRUE(h.in_half_plane());
  h.headings.push_back(4.0);
  EXPECT_THROW(h.validate(), ScenarioError);
  h.coordination.clear();
  EXPECT_NO_THROW(h.validate());
  EXPECT_FALSE(h.in_half_plane());
}
