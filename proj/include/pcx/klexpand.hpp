#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "pcx/errors.hpp"

namespace pcx {

/// Zero-mean stationary process with covariance sigma^2 exp(-mu |t1 - t2|),
/// expanded on the symmetric interval [-half_width, half_width].
struct ExpCovarianceSpec {
  double sigma = 1.0;       // process standard deviation
  double mu = 1.0;          // inverse correlation length
  double half_width = 1.0;  // T
};

struct KlFrequency {
  double omega;
  bool odd;  // odd terms solve mu - w tan(Tw) = 0, even w + mu tan(Tw) = 0
};

/// The count smallest positive eigen-frequencies, alternating odd/even.
/// Each root is bracketed between consecutive tangent asymptotes and refined
/// to 1e-12 relative; the k-th root lies in ((k-1) pi/2, k pi/2) / T.
std::vector<KlFrequency> solve_kl_frequencies(const ExpCovarianceSpec& spec, int count);

/// 2 sigma^2 mu / (omega^2 + mu^2).
double kl_eigenvalue(const ExpCovarianceSpec& spec, double omega);

/// Truncated expansion of the process: eigen-frequencies, eigenvalues and
/// the standard deviation of the driving iid variables.
struct KlBasis {
  ExpCovarianceSpec spec;
  std::vector<double> omegas;
  std::vector<double> lambdas;
  std::vector<bool> odd;
  double theta_std = 1.0;  // sigma_theta of the iid variables

  int count() const { return static_cast<int>(omegas.size()); }

  void write(std::ostream& os) const;
  static KlBasis read(std::istream& is, const ExpCovarianceSpec& spec, double theta_std);
};

/// theta_std = 1/sqrt(3) is the paper's value for Uniform[-1,1] drivers.
KlBasis build_kl_basis(const ExpCovarianceSpec& spec, int count, double theta_std);

/// Unit-L2-norm eigenfunction i (0-based) at time t:
/// cos(w t)/sqrt(T + sin(2 T w)/(2 w)) for odd terms,
/// sin(w t)/sqrt(T - sin(2 T w)/(2 w)) for even ones.
double eval_kl_eigenfunction(const KlBasis& basis, int i, double t);

/// Path value sum_i sqrt(lambda_i)/theta_std * g_i(t) * theta_i on a grid.
Eigen::VectorXd kl_sample_path(const KlBasis& basis, const Eigen::VectorXd& t_grid,
                               const Eigen::VectorXd& theta);

/// Truncated Mercer sum sum_i lambda_i g_i(t1) g_i(t2).
double reconstruct_covariance(const KlBasis& basis, double t1, double t2);

}  // namespace pcx
