#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <optional>
#include <vector>

#include "pcx/design.hpp"
#include "pcx/errors.hpp"
#include "pcx/multi_index.hpp"

namespace pcx {

/// Per-coefficient l1 weights w(l_k): positive, strictly increasing with the
/// polynomial order, normalized so the largest weight is one.
struct WeightLadder {
  Eigen::VectorXd per_coefficient;  // length L
  std::vector<double> by_order;     // length max_degree + 1
};

/// Power profile w(0) = w0, w(l) = l^zeta / max_degree^zeta for l >= 1.
/// Requires w0 < w(1) so the ladder is strictly increasing.
WeightLadder build_weight_ladder(const MultiIndexSet& set, double w0, double zeta);

/// Explicit per-order ladder; validated against the same properties.
WeightLadder build_weight_ladder(const MultiIndexSet& set,
                                 const std::vector<double>& by_order);

/// Affine sampled bounds: lower <= rows * a <= upper, entries may be +-inf.
struct BoundConstraints {
  Eigen::MatrixXd rows;   // mu x L
  Eigen::VectorXd lower;  // mu
  Eigen::VectorXd upper;  // mu
};

/// One instance of the fitting program
///   min ||W a||_1 + beta ||Lambda (v - Phi a)||_2
///   s.t. optional variance bound and sampled affine bounds.
/// Note the fitting term is the plain l2 norm, not its square.
struct FitProblem {
  DesignMatrix design;
  Eigen::VectorXd data;         // v, length nu
  WeightLadder weights;
  Eigen::VectorXd pdf_weights;  // diagonal of Lambda, length nu, >= 0
  double beta = 1.0;
  std::optional<double> variance_bound;  // sigma_bar^2 on sum_{k>=1} a_k^2 E[Phi_k^2]
  std::optional<BoundConstraints> bounds;
};

struct SolverOptions {
  double tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iters = 50000;
  double rho = 1.0;
  bool adapt_rho = true;
};

struct FitResult {
  Eigen::VectorXd coefficients;
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double constraint_violation = 0.0;
  Eigen::VectorXd fit_dual;  // subgradient of the fit term at the solution
};

struct SolveError : Error {
  FitResult last;
  SolveError(const std::string& what, FitResult r) : Error(what), last(std::move(r)) {}
};

struct InfeasibleError : Error {
  using Error::Error;
};

/// Exact cost of the objective at a.
double objective_value(const FitProblem& problem, const Eigen::VectorXd& a);

/// Cached normal-matrix factorization for repeated solves that share the
/// same design matrix, bound rows and constraint structure.
struct NormalCache {
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool variance_block = false;
  Eigen::Index terms = 0;
};
NormalCache build_normal_cache(const FitProblem& problem);

/// Solves the program by operator splitting (consensus ADMM): weighted
/// soft-thresholding for the l1 block, an exact prox of the un-squared
/// weighted l2 term for the fit block, Euclidean projection for the variance
/// ellipsoid and clipping for the sampled bounds. Deterministic.
/// Throws SolveError on non-convergence (carrying the last iterate) and
/// InfeasibleError when a = 0 violates the bound rows.
FitResult solve_pce(const FitProblem& problem, const SolverOptions& opts = {},
                    const NormalCache* cache = nullptr);

/// Optimality certificate for the unconstrained program: the largest
/// violation of the subgradient conditions at the returned solution
/// (dimensionless, weights are normalized to max 1).
double kkt_residual(const FitProblem& problem, const FitResult& result);

/// Plain least squares, Eq.-style min ||v - Phi a||_2; returns the
/// minimum-norm solution when the system is rank deficient (nu < L).
Eigen::VectorXd solve_least_squares(const DesignMatrix& design,
                                    const Eigen::VectorXd& data);

/// Closed-form ridge variant: min ||W a||_2^2 + beta ||Lambda (v - Phi a)||_2^2
/// via the normal equations (W^2 + beta Phi' Lambda^2 Phi) a = beta Phi' Lambda^2 v.
Eigen::VectorXd solve_ridge(const FitProblem& problem);

/// Euclidean projection onto { a : sum_{k>=1} a_k^2 norms_sq_k <= var_bound }.
/// The k = 0 coordinate is never altered.
Eigen::VectorXd project_variance_ellipsoid(const Eigen::VectorXd& a,
                                           const Eigen::VectorXd& norms_sq,
                                           double var_bound);

}  // namespace pcx
