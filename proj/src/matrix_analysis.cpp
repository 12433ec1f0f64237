#include "swarmlab/matrix_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "swarmlab/errors.hpp"
#include "swarmlab/swarm_graph.hpp"

namespace swarmlab {

namespace {

void require_stochastic(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidWeights("matrix must be square", 0.0);
  const auto dev = stochastic_deviation(m);
  if (dev.min_entry < 0.0 || dev.max_row_deviation > tol) {
    std::ostringstream os;
    os << "matrix is not row-stochastic (max |row sum - 1| = " << dev.max_row_deviation
       << ", min entry = " << dev.min_entry << ")";
    throw InvalidWeights(os.str(), dev.max_row_deviation);
  }
}

}  // namespace

nlohmann::json to_json(const ErgodicityReport& r) {
  return {{"kappa", r.kappa},
          {"nu", r.nu},
          {"slem", r.slem},
          {"irreducible", r.irreducible},
          {"aperiodic", r.aperiodic},
          {"verdict", r.consensus_verdict}};
}

double kappa(const Eigen::MatrixXd& m, double tol) {
  require_stochastic(m, tol);
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.rows(); ++j) {
      best = std::max(best, (m.row(i) - m.row(j)).cwiseAbs().sum());
    }
  }
  return 0.5 * best;
}

double kappa(const WeightMatrix& w) { return kappa(w.matrix(), kRowSumTolerance); }

double nu(const Eigen::MatrixXd& m, double tol) {
  require_stochastic(m, tol);
  if (m.size() == 0) return 0.0;
  return 1.0 - m.colwise().minCoeff().maxCoeff();
}

double nu(const WeightMatrix& w) { return nu(w.matrix(), kRowSumTolerance); }

double slem(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw PreconditionError("slem: matrix must be square");
  if (!m.allFinite()) throw PreconditionError("slem: matrix has non-finite entries");
  if (m.rows() < 2) return 0.0;
  // Extended precision: a defective eigenvalue with a k-block is only
  // resolved to about eps^(1/k).
  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::EigenSolver<MatrixXld> es(m.cast<long double>(), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalFailure("slem: eigen-solver did not converge");
  std::vector<double> mods;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) mods.push_back(static_cast<double>(std::abs(es.eigenvalues()[k])));
  std::sort(mods.begin(), mods.end(), std::greater<>());
  return mods[1];
}

ErgodicityReport analyze(const WeightMatrix& w, double tol) {
  ErgodicityReport r;
  r.kappa = kappa(w);
  r.nu = nu(w);
  r.slem = slem(w.matrix());
  r.irreducible = is_irreducible(w);
  r.aperiodic = r.irreducible && is_aperiodic(w);
  r.consensus_verdict = r.slem < 1.0 - tol;
  return r;
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] > rel_threshold * s[0]) ++r;
  }
  return r;
}

std::vector<ProductStep> product_diagnostics(const std::vector<WeightMatrix>& ws) {
  std::vector<ProductStep> out;
  if (ws.empty()) return out;
  const auto n = static_cast<Eigen::Index>(ws.front().size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t k = 0; k < ws.size(); ++k) {
    if (static_cast<Eigen::Index>(ws[k].size()) != n) {
      throw PreconditionError("product_diagnostics: matrices are not conformable");
    }
    p = ws[k].matrix() * p;
    out.push_back({k + 1, numerical_rank(p), kappa(p), (p.array() > 0.0).all()});
  }
  return out;
}

bool submultiplicativity_check(const std::vector<WeightMatrix>& ws) {
  if (ws.empty()) return true;
  const auto n = static_cast<Eigen::Index>(ws.front().size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  double bound = 1.0;
  for (const auto& w : ws) {
    if (static_cast<Eigen::Index>(w.size()) != n) {
      throw PreconditionError("submultiplicativity_check: matrices are not conformable");
    }
    p = w.matrix() * p;
    bound *= kappa(w);
  }
  return kappa(p) <= bound + 1e-12;
}

ExpectedMatrix expected_weight_matrix(const std::function<WeightMatrix(std::size_t)>& sample,
                                      bool fixed_graph, std::size_t draws) {
  ExpectedMatrix e;
  if (fixed_graph) {
    e.mean = sample(0).matrix();
    e.estimator = "analytic";
    e.samples = 1;
    return e;
  }
  if (draws == 0) throw PreconditionError("expected_weight_matrix: draws must be positive");
  for (std::size_t k = 0; k < draws; ++k) {
    const auto w = sample(k);
    if (k == 0) {
      e.mean = w.matrix();
    } else {
      if (w.matrix().rows() != e.mean.rows()) {
        throw PreconditionError("expected_weight_matrix: matrices are not conformable");
      }
      e.mean += w.matrix();
    }
  }
  e.mean /= static_cast<double>(draws);
  e.estimator = "sample_mean";
  e.samples = draws;
  return e;
}

}  // namespace swarmlab
