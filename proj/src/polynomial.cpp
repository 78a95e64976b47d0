#include "pcx/polynomial.hpp"

#include <string>

#include "pcx/errors.hpp"

namespace pcx {

const char* family_name(BasisFamily family) {
  return family == BasisFamily::Legendre ? "legendre" : "hermite";
}

BasisFamily family_from_name(const std::string& name) {
  if (name == "legendre") return BasisFamily::Legendre;
  if (name == "hermite") return BasisFamily::Hermite;
  throw ConfigError("unknown basis family: " + name);
}

double eval_univariate(BasisFamily family, int degree, double theta) {
  if (degree < 0) throw ConfigError("eval_univariate: degree must be >= 0");
  double prev = 1.0;  // order 0
  if (degree == 0) return prev;
  double cur = theta;  // order 1, both families
  if (family == BasisFamily::Legendre) {
    for (int a = 1; a < degree; ++a) {
      double next = ((2.0 * a + 1.0) * theta * cur - a * prev) / (a + 1.0);
      prev = cur;
      cur = next;
    }
  } else {
    // Probabilists' Hermite: He_{a+1} = theta He_a - a He_{a-1}.
    for (int a = 1; a < degree; ++a) {
      double next = theta * cur - a * prev;
      prev = cur;
      cur = next;
    }
  }
  return cur;
}

void eval_univariate_all(BasisFamily family, int max_degree, double theta,
                         double* values) {
  values[0] = 1.0;
  if (max_degree == 0) return;
  values[1] = theta;
  if (family == BasisFamily::Legendre) {
    for (int a = 1; a < max_degree; ++a)
      values[a + 1] = ((2.0 * a + 1.0) * theta * values[a] - a * values[a - 1]) / (a + 1.0);
  } else {
    for (int a = 1; a < max_degree; ++a)
      values[a + 1] = theta * values[a] - a * values[a - 1];
  }
}

double eval_multivariate(const MultiIndex& mi, BasisFamily family,
                         const Eigen::VectorXd& theta) {
  if (theta.size() != static_cast<Eigen::Index>(mi.exponents.size()))
    throw DimensionError("eval_multivariate: theta dimension mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < mi.exponents.size(); ++i)
    if (mi.exponents[i] != 0)
      p *= eval_univariate(family, mi.exponents[i], theta[static_cast<Eigen::Index>(i)]);
  return p;
}

double norm_sq(const MultiIndex& mi, BasisFamily family) {
  double p = 1.0;
  for (int e : mi.exponents) {
    if (e == 0) continue;
    if (family == BasisFamily::Legendre) {
      p /= 2.0 * e + 1.0;
    } else {
      for (int j = 2; j <= e; ++j) p *= j;  // e!
    }
  }
  return p;
}

BasisEvaluator::BasisEvaluator(const MultiIndexSet& set, BasisFamily family)
    : dimension_(set.dimension()), max_degree_(set.max_degree()), family_(family) {
  offsets_.reserve(set.size() + 1);
  offsets_.push_back(0);
  norms_sq_.resize(static_cast<Eigen::Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) {
    const MultiIndex& mi = set[k];
    for (int i = 0; i < dimension_; ++i)
      if (mi.exponents[i] != 0) entries_.push_back({i, mi.exponents[i]});
    offsets_.push_back(entries_.size());
    norms_sq_[static_cast<Eigen::Index>(k)] = norm_sq(mi, family);
  }
}

BasisEvaluator::Workspace BasisEvaluator::workspace() const {
  return Workspace{std::vector<double>(
      static_cast<std::size_t>(dimension_) * (max_degree_ + 1))};
}

void BasisEvaluator::row(const Eigen::VectorXd& theta, Workspace& ws,
                         double* out) const {
  if (theta.size() != dimension_)
    throw DimensionError("BasisEvaluator::row: theta dimension mismatch");
  const int stride = max_degree_ + 1;
  for (int i = 0; i < dimension_; ++i)
    eval_univariate_all(family_, max_degree_, theta[i],
                        ws.univariate.data() + static_cast<std::size_t>(i) * stride);
  const Eigen::Index L = terms();
  for (Eigen::Index k = 0; k < L; ++k) {
    double p = 1.0;
    for (std::size_t e = offsets_[static_cast<std::size_t>(k)];
         e < offsets_[static_cast<std::size_t>(k) + 1]; ++e)
      p *= ws.univariate[static_cast<std::size_t>(entries_[e].dim) * stride + entries_[e].exp];
    out[k] = p;
  }
}

double BasisEvaluator::dot(const Eigen::VectorXd& theta, const Eigen::VectorXd& a,
                           Workspace& ws) const {
  if (a.size() != terms())
    throw DimensionError("BasisEvaluator::dot: coefficient length mismatch");
  if (theta.size() != dimension_)
    throw DimensionError("BasisEvaluator::dot: theta dimension mismatch");
  const int stride = max_degree_ + 1;
  for (int i = 0; i < dimension_; ++i)
    eval_univariate_all(family_, max_degree_, theta[i],
                        ws.univariate.data() + static_cast<std::size_t>(i) * stride);
  double acc = 0.0;
  const Eigen::Index L = terms();
  for (Eigen::Index k = 0; k < L; ++k) {
    double p = 1.0;
    for (std::size_t e = offsets_[static_cast<std::size_t>(k)];
         e < offsets_[static_cast<std::size_t>(k) + 1]; ++e)
      p *= ws.univariate[static_cast<std::size_t>(entries_[e].dim) * stride + entries_[e].exp];
    acc += p * a[k];
  }
  return acc;
}

}  // namespace pcx
