#include "pcx/klexpand.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pcx/errors.hpp"
#include "pcx/rootfind.hpp"

namespace pcx {

namespace {

constexpr double kPi = 3.14159265358979323846264338;
constexpr double kAsymptoteMargin = 1e-9;

}  // namespace

std::vector<KlFrequency> solve_kl_frequencies(const ExpCovarianceSpec& spec, int count) {
  if (count < 1) throw ConfigError("solve_kl_frequencies: count must be >= 1");
  if (!(spec.sigma > 0.0 && spec.mu > 0.0 && spec.half_width > 0.0))
    throw ConfigError("solve_kl_frequencies: sigma, mu, half_width must be positive");

  const double T = spec.half_width;
  const double c = spec.mu * T;
  std::vector<KlFrequency> roots;
  roots.reserve(static_cast<std::size_t>(count));
  // In x = T w coordinates the k-th root (1-based) lies in ((k-1) pi/2, k pi/2):
  // odd terms solve x tan(x) = c on branches where tan >= 0, even terms solve
  // x + c tan(x) = 0 where tan <= 0.
  for (int k = 1; k <= count; ++k) {
    const bool odd = (k % 2) == 1;
    double lo = (k - 1) * (kPi / 2.0) + kAsymptoteMargin;
    double hi = k * (kPi / 2.0) - kAsymptoteMargin;
    auto f = [&](double v) { return odd ? v * std::tan(v) - c : v + c * std::tan(v); };
    auto df = [&](double v) {
      double t = std::tan(v);
      return odd ? t + v * (1.0 + t * t) : 1.0 + c * (1.0 + t * t);
    };
    double x = newton_bisect(f, df, lo, hi, 1e-14);
    // Newton polish to the floating-point floor; the residual in omega units
    // carries a 1/T amplification, so bracket accuracy alone is not enough.
    for (int polish = 0; polish < 4; ++polish) {
      double d = df(x);
      if (d == 0.0) break;
      double next = x - f(x) / d;
      if (next <= lo || next >= hi) break;
      x = next;
    }
    roots.push_back({x / T, odd});
  }
  return roots;
}

double kl_eigenvalue(const ExpCovarianceSpec& spec, double omega) {
  return 2.0 * spec.sigma * spec.sigma * spec.mu / (omega * omega + spec.mu * spec.mu);
}

KlBasis build_kl_basis(const ExpCovarianceSpec& spec, int count, double theta_std) {
  if (!(theta_std > 0.0)) throw ConfigError("build_kl_basis: theta_std must be positive");
  KlBasis basis;
  basis.spec = spec;
  basis.theta_std = theta_std;
  for (const KlFrequency& f : solve_kl_frequencies(spec, count)) {
    basis.omegas.push_back(f.omega);
    basis.lambdas.push_back(kl_eigenvalue(spec, f.omega));
    basis.odd.push_back(f.odd);
  }
  return basis;
}

double eval_kl_eigenfunction(const KlBasis& basis, int i, double t) {
  if (i < 0 || i >= basis.count())
    throw ConfigError("eval_kl_eigenfunction: index out of range");
  const double T = basis.spec.half_width;
  const double w = basis.omegas[static_cast<std::size_t>(i)];
  const double s = std::sin(2.0 * T * w) / (2.0 * w);
  if (basis.odd[static_cast<std::size_t>(i)]) return std::cos(w * t) / std::sqrt(T + s);
  return std::sin(w * t) / std::sqrt(T - s);
}

Eigen::VectorXd kl_sample_path(const KlBasis& basis, const Eigen::VectorXd& t_grid,
                               const Eigen::VectorXd& theta) {
  if (theta.size() != basis.count())
    throw DimensionError("kl_sample_path: theta length must equal basis count");
  Eigen::VectorXd path = Eigen::VectorXd::Zero(t_grid.size());
  for (int i = 0; i < basis.count(); ++i) {
    double coef = std::sqrt(basis.lambdas[static_cast<std::size_t>(i)]) / basis.theta_std *
                  theta[i];
    for (Eigen::Index j = 0; j < t_grid.size(); ++j)
      path[j] += coef * eval_kl_eigenfunction(basis, i, t_grid[j]);
  }
  return path;
}

double reconstruct_covariance(const KlBasis& basis, double t1, double t2) {
  double acc = 0.0;
  for (int i = 0; i < basis.count(); ++i)
    acc += basis.lambdas[static_cast<std::size_t>(i)] *
           eval_kl_eigenfunction(basis, i, t1) * eval_kl_eigenfunction(basis, i, t2);
  return acc;
}

void KlBasis::write(std::ostream& os) const {
  os.precision(17);
  for (int i = 0; i < count(); ++i)
    os << omegas[static_cast<std::size_t>(i)] << ' '
       << lambdas[static_cast<std::size_t>(i)] << ' '
       << (odd[static_cast<std::size_t>(i)] ? "odd" : "even") << '\n';
}

KlBasis KlBasis::read(std::istream& is, const ExpCovarianceSpec& spec, double theta_std) {
  KlBasis basis;
  basis.spec = spec;
  basis.theta_std = theta_std;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double w, l;
    std::string parity;
    if (!(ls >> w >> l >> parity)) throw Error("KlBasis::read: malformed line");
    basis.omegas.push_back(w);
    basis.lambdas.push_back(l);
    basis.odd.push_back(parity == "odd");
  }
  if (basis.omegas.empty()) throw Error("KlBasis::read: empty input");
  return basis;
}

}  // namespace pcx
