#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmlab/geometry.hpp"
#include "swarmlab/weight_matrix.hpp"

namespace swarmlab {

// Physical parameters of a swarm.  Units: meters, seconds, radians.
struct SwarmParams {
  std::size_t n = 2;  // >= 1; a lone robot is allowed
  double comm_range = 1.0;      // R_c
  double sense_range = 1.0;     // R_s
  double boundary_range = 1.0;  // R_b
  double speed = 1.0;           // constant speed v, or v_max for the sweep controller
  double sweep_speed = 0.0;     // v0
  double period = 1.0;          // T
  double spacing = 1.0;         // d
  int steps_per_rev = 20;       // M
  std::optional<double> barrier_length;  // D, only for the sweep assumption check

  // Throws ScenarioError on a hard invariant violation.
  void validate() const;

  // Soft checks of the sweep-coverage assumptions.  Each returned string is a
  // human-readable warning; empty when every assumption holds.
  std::vector<std::string> sweep_assumption_warnings() const;
};

// Binary symmetric neighbour graph with zero diagonal.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(std::size_t n);
  // Throws PreconditionError unless binary, symmetric and zero-diagonal.
  static AdjacencyMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void connect(std::size_t i, std::size_t j);

  std::vector<std::size_t> neighbours(std::size_t i) const;
  std::size_t degree(std::size_t i) const;
  std::vector<std::vector<int>> rows() const;

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

// a_ij = 1 iff i != j and |p_i - p_j| <= comm_range (inclusive).
AdjacencyMatrix build_adjacency(std::span<const Vec2> positions, double comm_range);

bool is_connected(const AdjacencyMatrix& a);

// Strong connectivity of the digraph i -> j whenever w_ij > 0, by forward and
// reverse reachability from vertex 0.
bool is_irreducible(const WeightMatrix& w);

// gcd of cycle lengths == 1.  Throws PreconditionError on a reducible matrix.
bool is_aperiodic(const WeightMatrix& w);

// Period (gcd of directed cycle lengths) of an irreducible matrix.
std::size_t period(const WeightMatrix& w);

}  // namespace swarmlab
