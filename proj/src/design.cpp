#include "pcx/design.hpp"

#include "pcx/errors.hpp"

namespace pcx {

DesignMatrix build_design_matrix(const Eigen::MatrixXd& samples,
                                 const MultiIndexSet& set, BasisFamily family) {
  if (samples.rows() > 0 && samples.cols() != set.dimension())
    throw DimensionError("build_design_matrix: sample dimension mismatch");
  BasisEvaluator eval(set, family);
  auto ws = eval.workspace();
  DesignMatrix d;
  d.phi.resize(samples.rows(), eval.terms());
  d.column_norms_sq = eval.norms_sq();
  Eigen::VectorXd theta(set.dimension());
  std::vector<double> row(static_cast<std::size_t>(eval.terms()));
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    theta = samples.row(r);
    eval.row(theta, ws, row.data());
    for (Eigen::Index k = 0; k < d.phi.cols(); ++k) d.phi(r, k) = row[static_cast<std::size_t>(k)];
  }
  return d;
}

}  // namespace pcx
