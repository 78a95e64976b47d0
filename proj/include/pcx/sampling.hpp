#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "pcx/errors.hpp"

#include "pcx/polynomial.hpp"

namespace pcx {

/// Input distribution; all components iid.
enum class InputFamily { UniformSymmetric, StandardNormal };

const char* input_family_name(InputFamily family);
InputFamily input_family_from_name(const std::string& name);

/// Table-I pairing between input distribution and polynomial basis.
BasisFamily paired_basis(InputFamily family);
InputFamily paired_input(BasisFamily family);

struct DistributionSpec {
  InputFamily family;
  int dimension;
};

struct SampleBatch {
  Eigen::MatrixXd samples;    // nu x n
  std::uint64_t seed = 0;
  Eigen::VectorXd pdf_values; // joint pdf at each sample
};

/// iid samples, deterministic in (spec, nu, seed). Sample r is produced by
/// the sub-stream keyed (seed, r), so the nu-sample batch is a prefix of any
/// larger batch with the same seed and concurrent generation of disjoint
/// ranges equals sequential generation.
SampleBatch draw_samples(const DistributionSpec& spec, Eigen::Index nu,
                         std::uint64_t seed);

/// Single sample from the keyed sub-stream (seed, index).
Eigen::VectorXd draw_sample(const DistributionSpec& spec, std::uint64_t seed,
                            std::uint64_t index);

/// Product of marginal densities; zero outside the support in the uniform case.
double joint_pdf(const DistributionSpec& spec, const Eigen::VectorXd& theta);

/// Standard normal CDF.
double normal_cdf(double z);

/// Maps a standard-normal draw z to the distribution with the given CDF:
/// returns F^-1(Phi(z)). The CDF must be strictly increasing on its support;
/// the root is bracketed by geometric expansion from [lo, hi] and refined by
/// bisection. Throws if no bracket can be found.
double inverse_transform(const std::function<double(double)>& target_cdf,
                         double z, double lo = -1.0, double hi = 1.0);

}  // namespace pcx
