#include "swarmlab/consensus.hpp"

#include <cmath>
#include <numeric>

#include "swarmlab/errors.hpp"
#include "swarmlab/geometry.hpp"

namespace swarmlab {

namespace {

constexpr double kGridTolerance = 1e-9;
constexpr double kSelfWeightSnap = 1e-12;

void check_row(std::span<const double> weights, std::size_t expected) {
  if (weights.size() != expected) {
    throw InvalidWeights("weight row length does not match 1 + neighbour count", 0.0);
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidWeights("weights must be non-negative", 0.0);
    sum += w;
  }
  const double dev = std::abs(sum - 1.0);
  if (dev > kRowSumTolerance) {
    throw InvalidWeights("weights do not sum to 1", dev);
  }
}

double accumulate(double self, std::span<const double> nbrs, double w_self,
                  std::span<const double> w_nbrs) {
  double acc = w_self * self;
  for (std::size_t k = 0; k < nbrs.size(); ++k) acc += w_nbrs[k] * nbrs[k];
  return acc;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

void HeadingState::validate() const {
  if (!coordination.empty() && coordination.size() != headings.size()) {
    throw ScenarioError("heading and coordination vectors differ in length");
  }
  for (double h : headings) {
    if (!std::isfinite(h)) throw ScenarioError("non-finite heading");
  }
  for (double c : coordination) {
    if (!std::isfinite(c)) throw ScenarioError("non-finite coordination variable");
  }
}

bool HeadingState::in_half_plane() const {
  for (double h : headings) {
    if (!(h >= 0.0 && h < kPi)) return false;
  }
  return true;
}

QuantizationGrid::QuantizationGrid(int steps) : m_(steps), q_(kTwoPi / steps) {
  if (steps < 4) throw PreconditionError("quantization grid needs M >= 4");
}

double QuantizationGrid::value(long index) const { return q_ * static_cast<double>(mod(index, m_)); }

int QuantizationGrid::index_of(double theta) const {
  const double k = theta / q_;
  const double r = std::round(k);
  if (!std::isfinite(k) || std::abs(k - r) > kGridTolerance) {
    throw PreconditionError("heading is not on the quantization grid");
  }
  return static_cast<int>(mod(static_cast<long>(r), m_));
}

bool QuantizationGrid::contains(double theta) const noexcept {
  const double k = theta / q_;
  return std::isfinite(k) && std::abs(k - std::round(k)) <= kGridTolerance;
}

std::string to_string(QuantBias b) { return b == QuantBias::floor ? "floor" : "ceil"; }

QuantBias parse_bias(const std::string& s) {
  if (s == "floor") return QuantBias::floor;
  if (s == "ceil") return QuantBias::ceil;
  throw SchemaError("/quantized/bias", "expected \"floor\" or \"ceil\"");
}

double vicsek_update(double phi_self, std::span<const double> phi_neighbours) {
  double s = std::sin(phi_self);
  double c = std::cos(phi_self);
  for (double p : phi_neighbours) {
    s += std::sin(p);
    c += std::cos(p);
  }
  const double count = 1.0 + static_cast<double>(phi_neighbours.size());
  if (std::hypot(s, c) <= 1e-12 * count) {
    throw DegenerateAverage("vicsek_update: resultant heading vector is zero");
  }
  return wrap_two_pi(std::atan2(s, c));
}

double simple_average_update(double phi_self, std::span<const double> phi_neighbours) {
  const double w = 1.0 / (1.0 + static_cast<double>(phi_neighbours.size()));
  const std::vector<double> ws(phi_neighbours.size(), w);
  return accumulate(phi_self, phi_neighbours, w, ws);
}

double weighted_average_update(double phi_self, std::span<const double> phi_neighbours,
                               std::span<const double> weights) {
  check_row(weights, phi_neighbours.size() + 1);
  return accumulate(phi_self, phi_neighbours, weights[0], weights.subspan(1));
}

std::vector<double> apply_weights(const WeightMatrix& w, std::span<const double> x) {
  const std::size_t n = w.size();
  if (x.size() != n) throw PreconditionError("apply_weights: size mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = w(i, i) * x[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) acc += w(i, j) * x[j];
    }
    out[i] = acc;
  }
  return out;
}

double cosine_similarity(std::span<const int> row_i, std::span<const int> row_j) {
  if (row_i.size() != row_j.size()) throw PreconditionError("cosine_similarity: length mismatch");
  long dot = 0, ni = 0, nj = 0;
  for (std::size_t k = 0; k < row_i.size(); ++k) {
    dot += static_cast<long>(row_i[k]) * row_j[k];
    ni += static_cast<long>(row_i[k]) * row_i[k];
    nj += static_cast<long>(row_j[k]) * row_j[k];
  }
  if (ni == 0 || nj == 0) throw IsolatedNode("cosine_similarity: zero adjacency row");
  // one rounding under the root keeps cos(v_ij) == cos(v_ji) exactly
  return static_cast<double>(dot) / std::sqrt(static_cast<double>(ni * nj));
}

std::vector<double> similarity_weights(const AdjacencyMatrix& a, std::size_t i) {
  const std::size_t n = a.size();
  const auto rows = a.rows();
  const auto nbrs = a.neighbours(i);
  if (nbrs.empty()) {
    throw IsolatedNode("similarity_weights: robot " + std::to_string(i) + " has no neighbours");
  }
  std::vector<double> w(n, 0.0);
  double sum = 0.0;
  for (auto j : nbrs) {
    w[j] = 1.0 - cosine_similarity(rows[i], rows[j]);
    sum += w[j];
  }
  if (sum > 1.0) {
    for (auto j : nbrs) w[j] /= sum;
  }
  double off = 0.0;
  for (auto j : nbrs) off += w[j];
  double self = 1.0 - off;
  if (std::abs(self) < kSelfWeightSnap) self = 0.0;
  w[i] = self;
  return w;
}

WeightMatrix similarity_matrix(const AdjacencyMatrix& a, bool hold_isolated) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (hold_isolated && a.degree(ui) == 0) {
      m(i, i) = 1.0;
      continue;
    }
    const auto row = similarity_weights(a, ui);
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return WeightMatrix(std::move(m));
}

WeightMatrix equal_weight_matrix(const AdjacencyMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto nbrs = a.neighbours(static_cast<std::size_t>(i));
    const double w = 1.0 / (1.0 + static_cast<double>(nbrs.size()));
    m(i, i) = w;
    for (auto j : nbrs) m(i, static_cast<Eigen::Index>(j)) = w;
  }
  // 1/(1+m) summed m+1 times can miss 1 by a few ulps; the tolerance absorbs it
  return WeightMatrix(std::move(m));
}

WeightMatrix apply_aperiodicity_guard(const WeightMatrix& w, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw PreconditionError("aperiodicity guard epsilon must lie in (0, 1)");
  }
  if (w.size() == 0 || w.has_positive_diagonal()) return w;
  Eigen::MatrixXd m = w.matrix();
  m.row(0) *= (1.0 - epsilon);
  m(0, 0) = epsilon;
  return WeightMatrix(std::move(m));
}

double quantized_delta(double theta_self, std::span<const double> theta_neighbours,
                       const QuantizationGrid& grid) {
  if (theta_neighbours.empty()) throw NoNeighbours("quantized_delta: no neighbours");
  const double mean = std::accumulate(theta_neighbours.begin(), theta_neighbours.end(), 0.0) /
                      static_cast<double>(theta_neighbours.size());
  return (theta_self - mean) / grid.step_size();
}

int quantized_update_index(int self, std::span<const int> neighbours, int steps, QuantBias bias) {
  if (neighbours.empty()) return self;
  const long m = static_cast<long>(neighbours.size());
  const long sum = std::accumulate(neighbours.begin(), neighbours.end(), 0L);
  // Δ·m = self·m - sum; compare in integers to stay exact
  const long delta_m = static_cast<long>(self) * m - sum;
  long out = self;
  if (std::labs(delta_m) > m) {
    out = floor_div(sum + self, m + 1);
  } else if (delta_m > 0 && bias == QuantBias::floor) {
    out = std::min<long>(self, floor_div(sum, m));
  } else if (delta_m < 0 && bias == QuantBias::ceil) {
    out = std::max<long>(self, ceil_div(sum, m));
  }
  return static_cast<int>(mod(out, steps));
}

double quantized_update(double theta_self, std::span<const double> theta_neighbours,
                        const QuantizationGrid& grid, QuantBias bias) {
  const int self = grid.index_of(theta_self);
  std::vector<int> idx;
  idx.reserve(theta_neighbours.size());
  for (double t : theta_neighbours) idx.push_back(grid.index_of(t));
  return grid.value(quantized_update_index(self, idx, grid.steps(), bias));
}

int quantized_vicsek_index(int self, std::span<const int> neighbours, const QuantizationGrid& grid) {
  std::vector<double> nb;
  nb.reserve(neighbours.size());
  for (int k : neighbours) nb.push_back(grid.value(k));
  double avg = 0.0;
  try {
    avg = vicsek_update(grid.value(self), nb);
  } catch (const DegenerateAverage&) {
    return self;
  }
  // snap so an average landing exactly on a grid point is not floored one step down
  const double k = std::floor(avg / grid.step_size() + kGridTolerance);
  return static_cast<int>(mod(static_cast<long>(k), grid.steps()));
}

}  // namespace swarmlab
