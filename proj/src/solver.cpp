#include "pcx/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "pcx/rootfind.hpp"

namespace pcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_ladder(const std::vector<double>& by_order) {
  for (double w : by_order)
    if (!(w > 0.0)) throw ConfigError("weight ladder: weights must be positive");
  for (std::size_t l = 1; l < by_order.size(); ++l)
    if (!(by_order[l] > by_order[l - 1]))
      throw ConfigError("weight ladder: weights must strictly increase with order");
  if (std::abs(by_order.back() - 1.0) > 1e-9)
    throw ConfigError("weight ladder: maximum weight must equal 1");
}

WeightLadder ladder_from_orders(const MultiIndexSet& set, std::vector<double> by_order) {
  validate_ladder(by_order);
  WeightLadder ladder;
  ladder.per_coefficient.resize(static_cast<Eigen::Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k)
    ladder.per_coefficient[static_cast<Eigen::Index>(k)] =
        by_order[static_cast<std::size_t>(set[k].total_degree)];
  ladder.by_order = std::move(by_order);
  return ladder;
}

double variance_of(const Eigen::VectorXd& a, const Eigen::VectorXd& norms_sq) {
  double v = 0.0;
  for (Eigen::Index k = 1; k < a.size(); ++k) v += a[k] * a[k] * norms_sq[k];
  return v;
}

// prox of z -> beta ||Lambda (v - z)||_2 with parameter 1/rho, evaluated at
// point p. Writes the result into z.
void fit_prox(const Eigen::VectorXd& data, const Eigen::VectorXd& lam,
              double beta, double rho, const Eigen::VectorXd& p,
              Eigen::VectorXd& z) {
  const Eigen::Index nu = data.size();
  Eigen::VectorXd d = data - p;  // optimal error e minimizes beta||Lambda e|| + rho/2 ||e - d||^2

  bool uniform = true;
  double lam0 = lam.size() ? lam[0] : 0.0;
  double weight_floor = kInf;
  for (Eigen::Index r = 0; r < nu; ++r) {
    if (lam[r] != lam0) uniform = false;
    if (lam[r] > 0.0) weight_floor = std::min(weight_floor, lam[r]);
  }

  Eigen::VectorXd e(nu);
  if (uniform) {
    if (lam0 <= 0.0) {
      e = d;
    } else {
      double dn = d.norm();
      double shrink = dn > 0.0 ? std::max(0.0, 1.0 - beta * lam0 / (rho * dn)) : 0.0;
      e = shrink * d;
    }
  } else {
    // Coordinates with zero pdf weight are unpenalized. For the rest, the
    // stationarity condition e_r = d_r / (1 + t lam_r^2) with t = beta/(rho s),
    // s = ||Lambda e||, reduces to a scalar secular equation in t.
    double ratio_sq = 0.0;  // ||Lambda^{-1} d||^2 over weighted coordinates
    for (Eigen::Index r = 0; r < nu; ++r)
      if (lam[r] > 0.0) ratio_sq += (d[r] / lam[r]) * (d[r] / lam[r]);
    const double bound = beta / rho;
    if (ratio_sq <= bound * bound) {
      for (Eigen::Index r = 0; r < nu; ++r) e[r] = lam[r] > 0.0 ? 0.0 : d[r];
    } else {
      auto H = [&](double t) {
        double acc = -bound * bound;
        for (Eigen::Index r = 0; r < nu; ++r) {
          if (lam[r] <= 0.0) continue;
          double g = t * lam[r] * d[r] / (1.0 + t * lam[r] * lam[r]);
          acc += g * g;
        }
        return acc;
      };
      auto dH = [&](double t) {
        double acc = 0.0;
        for (Eigen::Index r = 0; r < nu; ++r) {
          if (lam[r] <= 0.0) continue;
          double l2 = lam[r] * lam[r];
          double den = 1.0 + t * l2;
          acc += 2.0 * t * l2 * d[r] * d[r] / (den * den * den);
        }
        return acc;
      };
      double hi = 1.0;
      while (H(hi) < 0.0) hi *= 4.0;
      double t = newton_bisect(H, dH, 0.0, hi, 1e-14);
      for (Eigen::Index r = 0; r < nu; ++r)
        e[r] = lam[r] > 0.0 ? d[r] / (1.0 + t * lam[r] * lam[r]) : d[r];
    }
  }
  z = data - e;
}

}  // namespace

WeightLadder build_weight_ladder(const MultiIndexSet& set, double w0, double zeta) {
  if (!(w0 > 0.0)) throw ConfigError("weight ladder: w0 must be positive");
  if (zeta < 1.0) throw ConfigError("weight ladder: zeta must be >= 1");
  const int lbar = set.max_degree();
  std::vector<double> by_order(static_cast<std::size_t>(lbar) + 1);
  by_order[0] = w0;
  for (int l = 1; l <= lbar; ++l)
    by_order[static_cast<std::size_t>(l)] = std::pow(static_cast<double>(l), zeta) /
                                            std::pow(static_cast<double>(lbar), zeta);
  return ladder_from_orders(set, std::move(by_order));
}

WeightLadder build_weight_ladder(const MultiIndexSet& set,
                                 const std::vector<double>& by_order) {
  if (by_order.size() != static_cast<std::size_t>(set.max_degree()) + 1)
    throw ConfigError("weight ladder: need one weight per order 0..max_degree");
  return ladder_from_orders(set, by_order);
}

double objective_value(const FitProblem& problem, const Eigen::VectorXd& a) {
  if (a.size() != problem.design.phi.cols())
    throw DimensionError("objective_value: coefficient length mismatch");
  double l1 = problem.weights.per_coefficient.cwiseProduct(a).lpNorm<1>();
  Eigen::VectorXd r = problem.data - problem.design.phi * a;
  double fit = problem.pdf_weights.cwiseProduct(r).norm();
  return l1 + problem.beta * fit;
}

NormalCache build_normal_cache(const FitProblem& problem) {
  const Eigen::Index L = problem.design.phi.cols();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(L, L);
  M.noalias() += problem.design.phi.transpose() * problem.design.phi;
  if (problem.variance_bound) M.diagonal().array() += 1.0;
  if (problem.bounds)
    M.noalias() += problem.bounds->rows.transpose() * problem.bounds->rows;
  NormalCache cache;
  cache.llt.compute(M);
  if (cache.llt.info() != Eigen::Success)
    throw Error("solve_pce: normal matrix factorization failed");
  cache.variance_block = problem.variance_bound.has_value();
  cache.terms = L;
  return cache;
}

FitResult solve_pce(const FitProblem& problem, const SolverOptions& opts,
                    const NormalCache* cache) {
  const Eigen::Index L = problem.design.phi.cols();
  const Eigen::Index nu = problem.design.phi.rows();
  if (problem.data.size() != nu) throw DimensionError("solve_pce: data length mismatch");
  if (problem.pdf_weights.size() != nu)
    throw DimensionError("solve_pce: pdf weight length mismatch");
  if (!(problem.beta > 0.0)) throw ConfigError("solve_pce: beta must be positive");
  if (problem.variance_bound && *problem.variance_bound < 0.0)
    throw ConfigError("solve_pce: variance bound must be >= 0");

  const bool has_var = problem.variance_bound.has_value();
  const bool has_bounds = problem.bounds.has_value();
  Eigen::Index mu = 0;
  if (has_bounds) {
    mu = problem.bounds->rows.rows();
    if (problem.bounds->rows.cols() != L)
      throw DimensionError("solve_pce: bound row length mismatch");
    for (Eigen::Index r = 0; r < mu; ++r)
      if (problem.bounds->lower[r] > 0.0 || problem.bounds->upper[r] < 0.0)
        throw InfeasibleError("solve_pce: bound constraints infeasible at a = 0");
  }

  NormalCache local;
  if (!cache) {
    local = build_normal_cache(problem);
    cache = &local;
  }
  if (cache->terms != L || cache->variance_block != has_var)
    throw ConfigError("solve_pce: normal cache does not match problem");

  const Eigen::MatrixXd& phi = problem.design.phi;
  const Eigen::VectorXd& w = problem.weights.per_coefficient;
  // Scaled duals have magnitude ~ beta * max(lambda) / rho while the primal
  // iterates live at the data scale, so the starting penalty equates the
  // two; opts.rho is a multiplier on that balance point.
  const double data_scale = problem.data.size() ? problem.data.lpNorm<Eigen::Infinity>() : 0.0;
  const double lam_max = problem.pdf_weights.size() ? problem.pdf_weights.maxCoeff() : 1.0;
  double rho = (opts.rho > 0.0 ? opts.rho : 1.0) * std::max(problem.beta * lam_max, 1e-12) /
               std::max(data_scale, 1e-12);

  Eigen::VectorXd a = Eigen::VectorXd::Zero(L);
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(L), u1 = Eigen::VectorXd::Zero(L);
  Eigen::VectorXd x2 = Eigen::VectorXd::Zero(nu), u2 = Eigen::VectorXd::Zero(nu);
  Eigen::VectorXd x3, u3, x4, u4;
  if (has_var) {
    x3 = Eigen::VectorXd::Zero(L);
    u3 = Eigen::VectorXd::Zero(L);
  }
  if (has_bounds) {
    x4 = Eigen::VectorXd::Zero(mu);
    u4 = Eigen::VectorXd::Zero(mu);
  }

  Eigen::VectorXd x1_old, x2_old, x3_old, x4_old, rhs(L), phi_a(nu), psi_a;
  double prim = kInf, dual = kInf;
  // Rescaling the duals on a rho change perturbs the iterate and the
  // re-equilibration outlasts a short check interval, so changes are rate
  // limited and suspended once the residuals are within two orders of the
  // target.
  int last_rho_change = 0;
  int rho_cooldown = 500;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    // a-step: minimize sum_j rho/2 ||A_j a - x_j + u_j||^2.
    rhs = x1 - u1;
    rhs.noalias() += phi.transpose() * (x2 - u2);
    if (has_var) rhs += x3 - u3;
    if (has_bounds) rhs.noalias() += problem.bounds->rows.transpose() * (x4 - u4);
    a = cache->llt.solve(rhs);

    phi_a.noalias() = phi * a;
    if (has_bounds) psi_a.noalias() = problem.bounds->rows * a;

    x1_old = x1;
    x2_old = x2;
    if (has_var) x3_old = x3;
    if (has_bounds) x4_old = x4;

    // Block proxes.
    for (Eigen::Index k = 0; k < L; ++k) {
      double v = a[k] + u1[k];
      double thr = w[k] / rho;
      x1[k] = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
    }
    fit_prox(problem.data, problem.pdf_weights, problem.beta, rho, phi_a + u2, x2);
    if (has_var)
      x3 = project_variance_ellipsoid(a + u3, problem.design.column_norms_sq,
                                      *problem.variance_bound);
    if (has_bounds)
      x4 = (psi_a + u4).cwiseMax(problem.bounds->lower).cwiseMin(problem.bounds->upper);

    // Dual ascent.
    u1 += a - x1;
    u2 += phi_a - x2;
    if (has_var) u3 += a - x3;
    if (has_bounds) u4 += psi_a - x4;

    double prim_sq = (a - x1).squaredNorm() + (phi_a - x2).squaredNorm();
    if (has_var) prim_sq += (a - x3).squaredNorm();
    if (has_bounds) prim_sq += (psi_a - x4).squaredNorm();
    prim = std::sqrt(prim_sq);

    Eigen::VectorXd dvec = (x1 - x1_old);
    dvec.noalias() += phi.transpose() * (x2 - x2_old);
    if (has_var) dvec += x3 - x3_old;
    if (has_bounds) dvec.noalias() += problem.bounds->rows.transpose() * (x4 - x4_old);
    dual = rho * dvec.norm();

    const double stop_scale = opts.tol * (1.0 + a.norm());
    if (std::max(prim, dual) <= stop_scale) {
      ++it;
      break;
    }

    // Near the solution, rho changes are allowed only under extreme
    // imbalance (a vanishing dual residual means the iterate crawls and a
    // larger rho cannot oscillate). The cooldown doubles after every change
    // so adaptation tapers off and the tail contraction is undisturbed.
    const bool endgame = std::max(prim, dual) <= 100.0 * stop_scale;
    const double ratio_gate = endgame ? 1000.0 : 10.0;
    if (opts.adapt_rho && (it + 1) % 100 == 0 && it - last_rho_change >= rho_cooldown) {
      double factor = 0.0;
      if (prim > ratio_gate * dual)
        factor = 2.0;
      else if (dual > ratio_gate * prim)
        factor = 0.5;
      if (factor != 0.0) {
        rho *= factor;
        u1 /= factor;
        u2 /= factor;
        if (has_var) u3 /= factor;
        if (has_bounds) u4 /= factor;
        last_rho_change = it;
        rho_cooldown *= 2;
      }
    }
  }

  FitResult result;
  result.coefficients = a;
  result.objective = objective_value(problem, a);
  result.iterations = it;
  result.primal_residual = prim;
  result.dual_residual = dual;
  result.fit_dual = rho * u2;

  double viol = 0.0;
  if (has_var)
    viol = std::max(viol, variance_of(a, problem.design.column_norms_sq) -
                              *problem.variance_bound);
  if (has_bounds) {
    Eigen::VectorXd pa = problem.bounds->rows * a;
    for (Eigen::Index r = 0; r < mu; ++r) {
      viol = std::max(viol, problem.bounds->lower[r] - pa[r]);
      viol = std::max(viol, pa[r] - problem.bounds->upper[r]);
    }
  }
  result.constraint_violation = std::max(viol, 0.0);

  if (std::max(prim, dual) > opts.tol * (1.0 + a.norm()))
    throw SolveError("solve_pce: no convergence within max_iters", result);
  return result;
}

double kkt_residual(const FitProblem& problem, const FitResult& result) {
  const Eigen::VectorXd& a = result.coefficients;
  const Eigen::VectorXd& w = problem.weights.per_coefficient;
  const Eigen::VectorXd& lam = problem.pdf_weights;
  Eigen::VectorXd r = problem.data - problem.design.phi * a;
  double s = lam.cwiseProduct(r).norm();

  Eigen::VectorXd c;     // minus the fit-term subgradient mapped to coefficients
  double dual_excess = 0.0;
  const double scale = s > 0.0 ? s : 1.0;
  if (s > 1e-12 * std::max(1.0, problem.data.norm())) {
    c = problem.beta * (problem.design.phi.transpose() *
                        (lam.array().square() * r.array() / scale).matrix());
  } else {
    // Exact fit: certify with the solver's dual for the fit block.
    const Eigen::VectorXd& y = result.fit_dual;
    c = -(problem.design.phi.transpose() * y);
    double norm_ratio_sq = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (lam[i] > 0.0)
        norm_ratio_sq += (y[i] / lam[i]) * (y[i] / lam[i]);
      else
        dual_excess = std::max(dual_excess, std::abs(y[i]));
    }
    dual_excess =
        std::max(dual_excess, std::sqrt(norm_ratio_sq) / problem.beta - 1.0);
  }

  double stat = 0.0;
  const double anorm = a.lpNorm<Eigen::Infinity>();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (std::abs(a[k]) > 1e-10 * std::max(1.0, anorm))
      stat = std::max(stat, std::abs(c[k] - w[k] * (a[k] > 0.0 ? 1.0 : -1.0)));
    else
      stat = std::max(stat, std::max(0.0, std::abs(c[k]) - w[k]));
  }
  return std::max(stat, dual_excess);
}

Eigen::VectorXd solve_least_squares(const DesignMatrix& design,
                                    const Eigen::VectorXd& data) {
  if (design.phi.rows() != data.size())
    throw DimensionError("solve_least_squares: data length mismatch");
  if (design.phi.rows() == 0) return Eigen::VectorXd::Zero(design.phi.cols());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design.phi);
  return cod.solve(data);
}

Eigen::VectorXd solve_ridge(const FitProblem& problem) {
  if (!(problem.beta > 0.0)) throw ConfigError("solve_ridge: beta must be positive");
  const Eigen::MatrixXd& phi = problem.design.phi;
  Eigen::VectorXd lam_sq = problem.pdf_weights.array().square();
  Eigen::MatrixXd M = problem.weights.per_coefficient.array().square().matrix().asDiagonal();
  M.noalias() += problem.beta * phi.transpose() * lam_sq.asDiagonal() * phi;
  Eigen::VectorXd rhs = problem.beta * (phi.transpose() * lam_sq.cwiseProduct(problem.data));
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw Error("solve_ridge: singular normal system");
  return ldlt.solve(rhs);
}

Eigen::VectorXd project_variance_ellipsoid(const Eigen::VectorXd& a,
                                           const Eigen::VectorXd& norms_sq,
                                           double var_bound) {
  if (var_bound < 0.0)
    throw ConfigError("project_variance_ellipsoid: bound must be >= 0");
  if (norms_sq.size() != a.size())
    throw DimensionError("project_variance_ellipsoid: norms length mismatch");
  Eigen::VectorXd out = a;
  double v = variance_of(a, norms_sq);
  if (v <= var_bound) return out;
  if (var_bound == 0.0) {
    out.tail(out.size() - 1).setZero();
    return out;
  }
  // Lagrange multiplier gamma solves sum q_k a_k^2 / (1 + gamma q_k)^2 = bound.
  auto psi = [&](double g) {
    double acc = -var_bound;
    for (Eigen::Index k = 1; k < a.size(); ++k) {
      double den = 1.0 + g * norms_sq[k];
      acc += norms_sq[k] * a[k] * a[k] / (den * den);
    }
    return acc;
  };
  auto dpsi = [&](double g) {
    double acc = 0.0;
    for (Eigen::Index k = 1; k < a.size(); ++k) {
      double den = 1.0 + g * norms_sq[k];
      acc -= 2.0 * norms_sq[k] * norms_sq[k] * a[k] * a[k] / (den * den * den);
    }
    return acc;
  };
  double hi = 1.0;
  while (psi(hi) > 0.0) hi *= 4.0;
  double gamma = newton_bisect(psi, dpsi, 0.0, hi, 1e-12);
  for (Eigen::Index k = 1; k < a.size(); ++k)
    out[k] = a[k] / (1.0 + gamma * norms_sq[k]);
  return out;
}

}  // namespace pcx
