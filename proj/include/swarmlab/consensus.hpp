#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swarmlab/swarm_graph.hpp"
#include "swarmlab/weight_matrix.hpp"

namespace swarmlab {

// θ_i(kT) and the coordination variables φ_i(kT).  Headings are not wrapped.
struct HeadingState {
  std::vector<double> headings;
  std::vector<double> coordination;

  // Throws ScenarioError on non-finite values or mismatched lengths.
  void validate() const;
  // True iff every heading lies in [0, π).
  bool in_half_plane() const;
};

// Θ = {0, Q, ..., (M-1)Q}, Q = 2π/M.
class QuantizationGrid {
 public:
  explicit QuantizationGrid(int steps);

  int steps() const noexcept { return m_; }
  double step_size() const noexcept { return q_; }
  double value(long index) const;  // Q * (index mod M)

  // Grid index of an on-grid angle (tolerance 1e-9 in units of Q, any
  // multiple of 2π accepted).  Throws PreconditionError when off-grid.
  int index_of(double theta) const;
  bool contains(double theta) const noexcept;

 private:
  int m_;
  double q_;
};

enum class QuantBias { floor, ceil };
std::string to_string(QuantBias b);
QuantBias parse_bias(const std::string& s);

// atan2(Σ sin, Σ cos) over self and neighbours, in [0, 2π).  Throws
// DegenerateAverage when the resultant vanishes.
double vicsek_update(double phi_self, std::span<const double> phi_neighbours);

double simple_average_update(double phi_self, std::span<const double> phi_neighbours);

// weights[0] is w_ii, weights[1 + k] pairs with phi_neighbours[k].
double weighted_average_update(double phi_self, std::span<const double> phi_neighbours,
                               std::span<const double> weights);

// x'_i = w_ii x_i + Σ_{j≠i, ascending} w_ij x_j, the same accumulation order as
// weighted_average_update.
std::vector<double> apply_weights(const WeightMatrix& w, std::span<const double> x);

// Salton cosine similarity of two binary adjacency rows.
double cosine_similarity(std::span<const int> row_i, std::span<const int> row_j);

// Row i of the similarity weight matrix (length n).
std::vector<double> similarity_weights(const AdjacencyMatrix& a, std::size_t i);

// Isolated robots throw IsolatedNode unless `hold_isolated`, in which case
// their row is e_i.
WeightMatrix similarity_matrix(const AdjacencyMatrix& a, bool hold_isolated = false);

// w_ii = w_ij = 1/(1+|N_i|).
WeightMatrix equal_weight_matrix(const AdjacencyMatrix& a);

inline constexpr double kDefaultGuardEpsilon = 0.01;

// Gives the lowest-index robot self-weight ε when no diagonal entry is positive.
WeightMatrix apply_aperiodicity_guard(const WeightMatrix& w, double epsilon = kDefaultGuardEpsilon);

// Δ_i = (θ_i - mean of neighbour headings) / Q.  Throws NoNeighbours.
double quantized_delta(double theta_self, std::span<const double> theta_neighbours,
                       const QuantizationGrid& grid);

// Self-/neighbour-biased quantized update.
//   |Δ| > 1           : Q ⌊combined mean / Q⌋
//   0 < |Δ| <= 1      : floor bias: min(θ_i, Q ⌊neighbour mean / Q⌋)
//                       ceil bias : max(θ_i, Q ⌈neighbour mean / Q⌉)
//   Δ = 0             : θ_i
// Inputs must be on the grid.  No neighbours returns θ_i.
double quantized_update(double theta_self, std::span<const double> theta_neighbours,
                        const QuantizationGrid& grid, QuantBias bias = QuantBias::floor);

// The same rule on grid indices; exact integer arithmetic.
int quantized_update_index(int self, std::span<const int> neighbours, int steps, QuantBias bias);

// Floor-quantized Vicsek rule: Q ⌊atan2-average / Q⌋.  A vanishing resultant
// holds θ_i.
int quantized_vicsek_index(int self, std::span<const int> neighbours, const QuantizationGrid& grid);

}  // namespace swarmlab
