#include "pcx/sampling.hpp"

#include <cmath>

#include "pcx/errors.hpp"
#include "pcx/rng.hpp"
#include "pcx/rootfind.hpp"

namespace pcx {

const char* input_family_name(InputFamily family) {
  return family == InputFamily::UniformSymmetric ? "uniform_symmetric" : "standard_normal";
}

InputFamily input_family_from_name(const std::string& name) {
  if (name == "uniform_symmetric") return InputFamily::UniformSymmetric;
  if (name == "standard_normal") return InputFamily::StandardNormal;
  throw ConfigError("unknown input family: " + name);
}

BasisFamily paired_basis(InputFamily family) {
  return family == InputFamily::UniformSymmetric ? BasisFamily::Legendre
                                                 : BasisFamily::Hermite;
}

InputFamily paired_input(BasisFamily family) {
  return family == BasisFamily::Legendre ? InputFamily::UniformSymmetric
                                         : InputFamily::StandardNormal;
}

Eigen::VectorXd draw_sample(const DistributionSpec& spec, std::uint64_t seed,
                            std::uint64_t index) {
  RandomStream stream = RandomStream::keyed(seed, index);
  Eigen::VectorXd theta(spec.dimension);
  for (int j = 0; j < spec.dimension; ++j)
    theta[j] = spec.family == InputFamily::UniformSymmetric ? stream.uniform_sym()
                                                            : stream.normal();
  return theta;
}

SampleBatch draw_samples(const DistributionSpec& spec, Eigen::Index nu,
                         std::uint64_t seed) {
  if (spec.dimension < 1) throw ConfigError("draw_samples: dimension must be >= 1");
  if (nu < 0) throw ConfigError("draw_samples: nu must be >= 0");
  SampleBatch batch;
  batch.seed = seed;
  batch.samples.resize(nu, spec.dimension);
  batch.pdf_values.resize(nu);
  for (Eigen::Index r = 0; r < nu; ++r) {
    Eigen::VectorXd theta = draw_sample(spec, seed, static_cast<std::uint64_t>(r));
    batch.samples.row(r) = theta;
    batch.pdf_values[r] = joint_pdf(spec, theta);
  }
  return batch;
}

double joint_pdf(const DistributionSpec& spec, const Eigen::VectorXd& theta) {
  if (theta.size() != spec.dimension)
    throw DimensionError("joint_pdf: theta dimension mismatch");
  double p = 1.0;
  if (spec.family == InputFamily::UniformSymmetric) {
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      if (theta[i] < -1.0 || theta[i] > 1.0) return 0.0;
      p *= 0.5;
    }
  } else {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      p *= inv_sqrt_2pi * std::exp(-0.5 * theta[i] * theta[i]);
  }
  return p;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244008444); }

double inverse_transform(const std::function<double(double)>& target_cdf,
                         double z, double lo, double hi) {
  const double p = normal_cdf(z);
  if (hi <= lo) throw ConfigError("inverse_transform: empty initial bracket");
  double flo = target_cdf(lo) - p;
  double fhi = target_cdf(hi) - p;
  double width = hi - lo;
  int expansions = 0;
  while (flo > 0.0 && expansions < 200) {
    hi = lo;
    lo -= width;
    width *= 2.0;
    flo = target_cdf(lo) - p;
    ++expansions;
  }
  while (fhi < 0.0 && expansions < 200) {
    lo = hi;
    hi += width;
    width *= 2.0;
    fhi = target_cdf(hi) - p;
    ++expansions;
  }
  if (flo > 0.0 || fhi < 0.0)
    throw Error("inverse_transform: CDF inversion failed, root not bracketable");
  return bisect([&](double x) { return target_cdf(x) - p; }, lo, hi, 1e-13);
}

}  // namespace pcx
