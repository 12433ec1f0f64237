#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace swarmlab {

class AdjacencyMatrix;

inline constexpr double kRowSumTolerance = 1e-12;

// Row-stochastic, non-negative n x n influence matrix.  Row i holds robot i's
// self-weight on the diagonal and its neighbour weights off it.
class WeightMatrix {
 public:
  // Throws InvalidWeights if any entry is negative or a row sum is off by more
  // than `tol`.
  explicit WeightMatrix(Eigen::MatrixXd entries, double tol = kRowSumTolerance);

  static WeightMatrix identity(std::size_t n);
  static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  bool has_positive_diagonal() const noexcept;

  // support(row i) ⊆ {i} ∪ neighbours(i)
  bool respects(const AdjacencyMatrix& a) const;

 private:
  Eigen::MatrixXd m_;
};

// Largest |row sum - 1| and the most negative entry (0 if none).  Works on any
// square matrix; used for diagnostics before WeightMatrix construction.
struct StochasticDeviation {
  double max_row_deviation = 0.0;
  double min_entry = 0.0;
};
StochasticDeviation stochastic_deviation(const Eigen::MatrixXd& m);

}  // namespace swarmlab
