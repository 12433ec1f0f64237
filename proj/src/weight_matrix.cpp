#include "swarmlab/weight_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swarmlab/errors.hpp"
#include "swarmlab/swarm_graph.hpp"

namespace swarmlab {

StochasticDeviation stochastic_deviation(const Eigen::MatrixXd& m) {
  StochasticDeviation d;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    d.max_row_deviation = std::max(d.max_row_deviation, std::abs(m.row(i).sum() - 1.0));
  }
  if (m.size() > 0) d.min_entry = std::min(0.0, m.minCoeff());
  return d;
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd entries, double tol) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw InvalidWeights("weight matrix must be square", 0.0);
  }
  if (!m_.allFinite()) throw InvalidWeights("weight matrix has non-finite entries", 0.0);
  const auto dev = stochastic_deviation(m_);
  if (dev.min_entry < 0.0) {
    std::ostringstream os;
    os << "weight matrix has a negative entry (" << dev.min_entry << ")";
    throw InvalidWeights(os.str(), dev.max_row_deviation);
  }
  if (dev.max_row_deviation > tol) {
    std::ostringstream os;
    os << "weight matrix is not row-stochastic: max |row sum - 1| = " << dev.max_row_deviation;
    throw InvalidWeights(os.str(), dev.max_row_deviation);
  }
}

WeightMatrix WeightMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return WeightMatrix(Eigen::MatrixXd::Identity(k, k));
}

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(r.size()) != n) {
      throw InvalidWeights("weight matrix must be square", 0.0);
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = r[static_cast<std::size_t>(j)];
  }
  return WeightMatrix(std::move(m));
}

bool WeightMatrix::has_positive_diagonal() const noexcept {
  return (m_.diagonal().array() > 0.0).any();
}

bool WeightMatrix::respects(const AdjacencyMatrix& a) const {
  if (a.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (i != j && (*this)(i, j) > 0.0 && !a(i, j)) return false;
    }
  }
  return true;
}

}  // namespace swarmlab
