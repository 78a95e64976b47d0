#pragma once

#include <Eigen/Core>

#include "pcx/polynomial.hpp"

namespace pcx {

/// Basis evaluations at the sampled inputs: row r is Phi(theta_(r)).
/// Column 0 is identically one (the degree-0 polynomial).
struct DesignMatrix {
  Eigen::MatrixXd phi;              // nu x L
  Eigen::VectorXd column_norms_sq;  // E[Phi_k^2], length L
};

/// samples is nu x n (one input vector per row); nu = 0 is accepted and
/// yields an empty matrix with L columns.
DesignMatrix build_design_matrix(const Eigen::MatrixXd& samples,
                                 const MultiIndexSet& set, BasisFamily family);

}  // namespace pcx
