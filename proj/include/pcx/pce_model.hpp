#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <memory>

#include "pcx/polynomial.hpp"
#include "pcx/sampling.hpp"

namespace pcx {

/// The fitted surrogate: basis spec plus coefficient vector, with the
/// polynomial norms cached for the moment formulas.
class PceModel {
 public:
  PceModel(MultiIndexSet set, BasisFamily family, Eigen::VectorXd coefficients);

  const MultiIndexSet& index_set() const { return set_; }
  BasisFamily family() const { return family_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const Eigen::VectorXd& norms_sq() const { return evaluator_->norms_sq(); }
  int dimension() const { return set_.dimension(); }

  /// Phi(theta) . a.
  double evaluate(const Eigen::VectorXd& theta) const;

  /// E[v] = a_0.
  double mean() const { return coefficients_[0]; }

  /// Var(v) = sum_{k>=1} a_k^2 E[Phi_k^2].
  double variance() const;

  /// count evaluations at iid draws from the paired input distribution;
  /// deterministic in seed, draws keyed per index.
  Eigen::VectorXd mc(Eigen::Index count, std::uint64_t seed) const;

  /// Text format: header (n, max_degree, family) then one coefficient per
  /// line at full precision; round-trips losslessly.
  void save(std::ostream& os) const;
  static PceModel load(std::istream& is);

 private:
  MultiIndexSet set_;
  BasisFamily family_;
  Eigen::VectorXd coefficients_;
  std::shared_ptr<const BasisEvaluator> evaluator_;
};

/// Histogram density estimate (area one) plus quartiles by linear
/// interpolation of the order statistics.
struct EmpiricalStats {
  double q25 = 0.0, q50 = 0.0, q75 = 0.0;
  std::vector<double> bin_edges;  // bins + 1
  std::vector<double> density;    // bins
};

EmpiricalStats empirical_stats(const Eigen::VectorXd& samples, int bins = 100);

/// Interpolated order statistic at probability p in [0, 1].
double quantile(const Eigen::VectorXd& samples, double p);

}  // namespace pcx
