#include "pcx/pce_model.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcx/errors.hpp"

namespace pcx {

PceModel::PceModel(MultiIndexSet set, BasisFamily family, Eigen::VectorXd coefficients)
    : set_(std::move(set)), family_(family), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != static_cast<Eigen::Index>(set_.size()))
    throw DimensionError("PceModel: coefficient count must match index set");
  evaluator_ = std::make_shared<BasisEvaluator>(set_, family_);
}

double PceModel::evaluate(const Eigen::VectorXd& theta) const {
  auto ws = evaluator_->workspace();
  return evaluator_->dot(theta, coefficients_, ws);
}

double PceModel::variance() const {
  double v = 0.0;
  const Eigen::VectorXd& q = evaluator_->norms_sq();
  for (Eigen::Index k = 1; k < coefficients_.size(); ++k)
    v += coefficients_[k] * coefficients_[k] * q[k];
  return v;
}

Eigen::VectorXd PceModel::mc(Eigen::Index count, std::uint64_t seed) const {
  if (count < 0) throw ConfigError("PceModel::mc: count must be >= 0");
  DistributionSpec spec{paired_input(family_), dimension()};
  Eigen::VectorXd out(count);
  auto ws = evaluator_->workspace();
  for (Eigen::Index i = 0; i < count; ++i) {
    Eigen::VectorXd theta = draw_sample(spec, seed, static_cast<std::uint64_t>(i));
    out[i] = evaluator_->dot(theta, coefficients_, ws);
  }
  return out;
}

void PceModel::save(std::ostream& os) const {
  os << "n " << set_.dimension() << '\n'
     << "max_degree " << set_.max_degree() << '\n'
     << "family " << family_name(family_) << '\n'
     << "coefficients " << coefficients_.size() << '\n';
  os.precision(17);
  for (Eigen::Index k = 0; k < coefficients_.size(); ++k) os << coefficients_[k] << '\n';
}

PceModel PceModel::load(std::istream& is) {
  std::string key, family;
  int n = 0, lbar = -1;
  Eigen::Index count = 0;
  if (!(is >> key >> n) || key != "n") throw Error("PceModel::load: bad header (n)");
  if (!(is >> key >> lbar) || key != "max_degree")
    throw Error("PceModel::load: bad header (max_degree)");
  if (!(is >> key >> family) || key != "family")
    throw Error("PceModel::load: bad header (family)");
  if (!(is >> key >> count) || key != "coefficients")
    throw Error("PceModel::load: bad header (coefficients)");
  MultiIndexSet set(n, lbar);
  if (count != static_cast<Eigen::Index>(set.size()))
    throw Error("PceModel::load: coefficient count does not match basis");
  Eigen::VectorXd a(count);
  for (Eigen::Index k = 0; k < count; ++k)
    if (!(is >> a[k])) throw Error("PceModel::load: truncated coefficients");
  return PceModel(std::move(set), family_from_name(family), std::move(a));
}

double quantile(const Eigen::VectorXd& samples, double p) {
  if (samples.size() == 0) throw Error("quantile: empty sample set");
  std::vector<double> s(samples.data(), samples.data() + samples.size());
  std::sort(s.begin(), s.end());
  if (s.size() == 1) return s[0];
  double pos = p * static_cast<double>(s.size() - 1);
  auto i = static_cast<std::size_t>(pos);
  if (i >= s.size() - 1) return s.back();
  double frac = pos - static_cast<double>(i);
  return s[i] + frac * (s[i + 1] - s[i]);
}

EmpiricalStats empirical_stats(const Eigen::VectorXd& samples, int bins) {
  if (samples.size() == 0) throw Error("empirical_stats: empty sample set");
  if (bins < 1) throw ConfigError("empirical_stats: bins must be >= 1");
  EmpiricalStats st;
  st.q25 = quantile(samples, 0.25);
  st.q50 = quantile(samples, 0.50);
  st.q75 = quantile(samples, 0.75);

  double lo = samples.minCoeff();
  double hi = samples.maxCoeff();
  if (hi <= lo) hi = lo + 1.0;  // constant samples occupy one bin
  st.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  st.density.assign(static_cast<std::size_t>(bins), 0.0);
  double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) st.bin_edges[static_cast<std::size_t>(b)] = lo + b * width;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    auto b = static_cast<std::size_t>((samples[i] - lo) / width);
    if (b >= st.density.size()) b = st.density.size() - 1;
    st.density[b] += 1.0;
  }
  double total = static_cast<double>(samples.size()) * width;
  for (double& d : st.density) d /= total;
  return st;
}

}  // namespace pcx
