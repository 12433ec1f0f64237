#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "swarmlab/weight_matrix.hpp"

namespace swarmlab {

struct ErgodicityReport {
  double kappa = 0.0;
  double nu = 0.0;
  double slem = 0.0;
  bool irreducible = false;
  bool aperiodic = false;
  bool consensus_verdict = false;
};

nlohmann::json to_json(const ErgodicityReport& r);

inline constexpr double kDefaultVerdictTolerance = 1e-9;

// Both coefficients check row-stochasticity to `tol` first (InvalidWeights).
// The raw-matrix overloads exist for running products, whose row sums drift by
// rounding.
double kappa(const WeightMatrix& w);
double kappa(const Eigen::MatrixXd& m, double tol = 1e-9);
double nu(const WeightMatrix& w);
double nu(const Eigen::MatrixXd& m, double tol = 1e-9);

// Second-largest eigenvalue modulus, counting multiplicity.  0 for 1x1.
// Throws NumericalFailure if the eigen-solver does not converge.
double slem(const Eigen::MatrixXd& m);

ErgodicityReport analyze(const WeightMatrix& w, double tol = kDefaultVerdictTolerance);

struct ProductStep {
  std::size_t step = 0;  // 1-based: P_1 = W_1
  std::size_t rank = 0;
  double kappa = 0.0;
  bool positive = false;  // every entry of P_k > 0
};

inline constexpr double kRankThreshold = 1e-8;

// Running left product P_k = W_k ... W_1; rank counts singular values above
// 1e-8 σ_1.
std::vector<ProductStep> product_diagnostics(const std::vector<WeightMatrix>& ws);

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_threshold = kRankThreshold);

// κ(W_r ... W_1) <= Π κ(W_i) + 1e-12.
bool submultiplicativity_check(const std::vector<WeightMatrix>& ws);

// 𝔼W: "analytic" when the sequence is constant (fixed graph), otherwise the
// sample mean of `draws` matrices from `sample(k)`, k = 0..draws-1.
struct ExpectedMatrix {
  Eigen::MatrixXd mean;
  std::string estimator;
  std::size_t samples = 0;
};

inline constexpr std::size_t kDefaultExpectationDraws = 1000;

ExpectedMatrix expected_weight_matrix(const std::function<WeightMatrix(std::size_t)>& sample,
                                      bool fixed_graph,
                                      std::size_t draws = kDefaultExpectationDraws);

}  // namespace swarmlab
