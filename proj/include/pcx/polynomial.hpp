#pragma once

#include <Eigen/Core>
#include <vector>

#include "pcx/multi_index.hpp"

namespace pcx {

/// Orthogonal polynomial family, each paired with one input distribution:
/// Legendre with Uniform[-1,1], probabilists' Hermite with N(0,1).
/// Laguerre/Jacobi are deliberately not implemented.
enum class BasisFamily { Legendre, Hermite };

const char* family_name(BasisFamily family);
BasisFamily family_from_name(const std::string& name);

/// Univariate polynomial value by the three-term recursion.
double eval_univariate(BasisFamily family, int degree, double theta);

/// Fills values[0..max_degree] with all univariate values at theta.
void eval_univariate_all(BasisFamily family, int max_degree, double theta,
                         double* values);

/// Product of univariate evaluations over the dimensions.
double eval_multivariate(const MultiIndex& mi, BasisFamily family,
                         const Eigen::VectorXd& theta);

/// E[Phi_alpha(theta)^2] under the paired distribution:
/// Legendre -> prod 1/(2 alpha_i + 1), Hermite -> prod alpha_i!.
double norm_sq(const MultiIndex& mi, BasisFamily family);

/// Evaluates the full polynomial vector Phi(theta) for a multi-index set.
/// Exponent lists are packed once so repeated evaluation skips zero entries.
class BasisEvaluator {
 public:
  BasisEvaluator(const MultiIndexSet& set, BasisFamily family);

  /// Per-thread scratch; reusing one across calls avoids reallocation.
  struct Workspace {
    std::vector<double> univariate;  // dimension x (max_degree + 1), row-major
  };
  Workspace workspace() const;

  int dimension() const { return dimension_; }
  Eigen::Index terms() const { return static_cast<Eigen::Index>(offsets_.size()) - 1; }
  BasisFamily family() const { return family_; }
  const Eigen::VectorXd& norms_sq() const { return norms_sq_; }

  /// Fills row[0..terms) with Phi(theta).
  void row(const Eigen::VectorXd& theta, Workspace& ws, double* row) const;

  /// Single value Phi(theta) . a.
  double dot(const Eigen::VectorXd& theta, const Eigen::VectorXd& a,
             Workspace& ws) const;

 private:
  int dimension_;
  int max_degree_;
  BasisFamily family_;
  // Nonzero exponents of index k live in entries_[offsets_[k] .. offsets_[k+1]).
  struct Entry {
    int dim;
    int exp;
  };
  std::vector<Entry> entries_;
  std::vector<std::size_t> offsets_;
  Eigen::VectorXd norms_sq_;
};

}  // namespace pcx
