#include "swarmlab/swarm_graph.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "swarmlab/errors.hpp"

namespace swarmlab {

namespace {

bool positive(double x) { return x > 0.0; }

std::vector<bool> reachable(const Eigen::MatrixXd& m, bool reverse) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<bool> seen(n, false);
  if (n == 0) return seen;
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (std::size_t v = 0; v < n; ++v) {
      const double e = reverse ? m(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u))
                               : m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (!seen[v] && positive(e)) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

void SwarmParams::validate() const {
  auto fail = [](const std::string& what) { throw ScenarioError("params: " + what); };
  if (n < 1) fail("n must be >= 1");
  if (!(comm_range > 0.0) || !std::isfinite(comm_range)) fail("comm_range must be > 0");
  if (!(sense_range > 0.0) || !std::isfinite(sense_range)) fail("sense_range must be > 0");
  if (!(boundary_range > 0.0) || !std::isfinite(boundary_range)) fail("boundary_range must be > 0");
  if (!(period > 0.0) || !std::isfinite(period)) fail("period must be > 0");
  if (!(speed >= 0.0) || !std::isfinite(speed)) fail("speed must be finite and >= 0");
  if (!std::isfinite(sweep_speed)) fail("sweep_speed must be finite");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) fail("spacing must be > 0");
  if (steps_per_rev < 4) fail("steps_per_rev must be >= 4");
  if (barrier_length && !(*barrier_length > 0.0)) fail("barrier_length must be > 0");
}

std::vector<std::string> SwarmParams::sweep_assumption_warnings() const {
  std::vector<std::string> out;
  const double root2 = std::sqrt(2.0);
  auto warn = [&out](const std::string& s) { out.push_back(s); };
  if (!(comm_range < speed * period / root2)) {
    warn("assumption R_c < v_max*T/sqrt(2) does not hold");
  }
  if (!(boundary_range / comm_range > root2)) {
    warn("assumption R_b/R_c > sqrt(2) does not hold");
  }
  if (!(sense_range < comm_range)) {
    warn("assumption R_s in (0, R_c) does not hold");
  }
  if (barrier_length && !(static_cast<double>(n + 1) * sense_range > *barrier_length)) {
    warn("assumption (n+1)*R_s > D does not hold");
  }
  const double bound =
      std::min(speed * period - comm_range * root2, boundary_range - comm_range * root2) / period;
  if (!(std::abs(sweep_speed) > 0.0 && std::abs(sweep_speed) <= bound)) {
    std::ostringstream os;
    os << "assumption 0 < |v0| <= " << bound << " does not hold";
    warn(os.str());
  }
  return out;
}

AdjacencyMatrix::AdjacencyMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

AdjacencyMatrix AdjacencyMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.size();
  AdjacencyMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw PreconditionError("adjacency matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) throw PreconditionError("adjacency entries must be 0 or 1");
      if (i == j && v != 0) throw PreconditionError("adjacency diagonal must be zero");
      if (rows[j].size() == n && rows[j][i] != v) {
        throw PreconditionError("adjacency matrix must be symmetric");
      }
      a.bits_[i * n + j] = static_cast<std::uint8_t>(v);
    }
  }
  return a;
}

void AdjacencyMatrix::connect(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw PreconditionError("adjacency index out of range");
  if (i == j) throw PreconditionError("self-loops are not allowed");
  bits_[i * n_ + j] = 1;
  bits_[j * n_ + i] = 1;
}

std::vector<std::size_t> AdjacencyMatrix::neighbours(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) {
    if (bits_[i * n_ + j]) out.push_back(j);
  }
  return out;
}

std::size_t AdjacencyMatrix::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += bits_[i * n_ + j];
  return d;
}

std::vector<std::vector<int>> AdjacencyMatrix::rows() const {
  std::vector<std::vector<int>> out(n_, std::vector<int>(n_, 0));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = bits_[i * n_ + j];
  }
  return out;
}

AdjacencyMatrix build_adjacency(std::span<const Vec2> positions, double comm_range) {
  AdjacencyMatrix a(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (distance(positions[i], positions[j]) <= comm_range) a.connect(i, j);
    }
  }
  return a;
}

bool is_connected(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : a.neighbours(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

bool is_irreducible(const WeightMatrix& w) {
  const auto fwd = reachable(w.matrix(), false);
  const auto bwd = reachable(w.matrix(), true);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!fwd[i] || !bwd[i]) return false;
  }
  return true;
}

std::size_t period(const WeightMatrix& w) {
  if (!is_irreducible(w)) throw PreconditionError("period requires an irreducible matrix");
  const std::size_t n = w.size();
  const auto& m = w.matrix();
  std::vector<long> level(n, -1);
  std::queue<std::size_t> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (std::size_t v = 0; v < n; ++v) {
      if (level[v] < 0 && positive(m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)))) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  // Every edge u -> v closes a walk of length level[u] + 1 - level[v] back to
  // the BFS tree; the period is the gcd of those lengths.
  long g = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (positive(m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)))) {
        g = std::gcd(g, std::labs(level[u] + 1 - level[v]));
      }
    }
  }
  return static_cast<std::size_t>(g);
}

bool is_aperiodic(const WeightMatrix& w) {
  if (!is_irreducible(w)) throw PreconditionError("is_aperiodic requires an irreducible matrix");
  if (w.has_positive_diagonal()) return true;
  return period(w) == 1;
}

}  // namespace swarmlab
