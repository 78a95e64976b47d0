#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pcx/pce_model.hpp"
#include "pcx/rng.hpp"

using namespace pcx;

namespace {

PceModel random_model(int n, int lbar, BasisFamily family, std::uint64_t seed) {
  MultiIndexSet set(n, lbar);
  RandomStream stream(seed);
  Eigen::VectorXd a(static_cast<Eigen::Index>(set.size()));
  for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = stream.uniform_sym();
  return PceModel(std::move(set), family, std::move(a));
}

}  // namespace

TEST_CASE("evaluate: constant-only and identity models") {
  MultiIndexSet set(2, 2);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(6);
  a[0] = 2.3;
  PceModel constant(set, BasisFamily::Legendre, a);
  Eigen::VectorXd theta(2);
  theta << 0.4, -0.9;
  CHECK(constant.evaluate(theta) == doctest::Approx(2.3));
  CHECK(constant.mean() == doctest::Approx(2.3));

  MultiIndexSet line(1, 1);
  Eigen::VectorXd b(2);
  b << 0.0, 1.0;
  PceModel identity(line, BasisFamily::Legendre, b);
  Eigen::VectorXd x(1);
  x << 0.4;
  CHECK(identity.evaluate(x) == doctest::Approx(0.4));
}

TEST_CASE("evaluate agrees with the naive term-by-term oracle") {
  PceModel model = random_model(3, 3, BasisFamily::Legendre, 404);
  DistributionSpec spec{InputFamily::UniformSymmetric, 3};
  for (std::uint64_t i = 0; i < 20; ++i) {
    Eigen::VectorXd theta = draw_sample(spec, 8, i);
    double naive = 0.0;
    for (std::size_t k = 0; k < model.index_set().size(); ++k)
      naive += model.coefficients()[static_cast<Eigen::Index>(k)] *
               eval_multivariate(model.index_set()[k], model.family(), theta);
    CHECK(model.evaluate(theta) == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("evaluate is linear in the coefficients") {
  MultiIndexSet set(2, 3);
  RandomStream stream(777);
  Eigen::VectorXd a(static_cast<Eigen::Index>(set.size())), b(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    a[k] = stream.uniform_sym();
    b[k] = stream.uniform_sym();
  }
  PceModel ma(set, BasisFamily::Hermite, a);
  PceModel mb(set, BasisFamily::Hermite, b);
  PceModel msum(set, BasisFamily::Hermite, 2.0 * a + 3.0 * b);
  Eigen::VectorXd theta(2);
  theta << 0.7, -1.2;
  CHECK(msum.evaluate(theta) ==
        doctest::Approx(2.0 * ma.evaluate(theta) + 3.0 * mb.evaluate(theta)).epsilon(1e-12));
}

TEST_CASE("moments from coefficients") {
  MultiIndexSet set(1, 2);
  Eigen::VectorXd a(3);
  a << 1.0, 2.0, 3.0;
  PceModel model(set, BasisFamily::Legendre, a);
  CHECK(model.mean() == 1.0);
  // 4 * (1/3) + 9 * (1/5) = 47/15
  CHECK(model.variance() == doctest::Approx(47.0 / 15.0));

  Eigen::VectorXd only_mean = Eigen::VectorXd::Zero(3);
  only_mean[0] = 5.0;
  CHECK(PceModel(set, BasisFamily::Legendre, only_mean).variance() == 0.0);

  Eigen::VectorXd unit(2);
  unit << 0.0, 1.0;
  CHECK(PceModel(MultiIndexSet(1, 1), BasisFamily::Legendre, unit).variance() ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("mc: determinism, emptiness and moment consistency") {
  PceModel model = random_model(2, 2, BasisFamily::Legendre, 5150);
  CHECK(model.mc(0, 9).size() == 0);
  Eigen::VectorXd a = model.mc(5000, 9);
  Eigen::VectorXd b = model.mc(5000, 9);
  CHECK(a == b);

  Eigen::VectorXd big = model.mc(1000000, 10);
  double mean = big.mean();
  double var = (big.array() - mean).square().mean();
  double se_mean = std::sqrt(var / static_cast<double>(big.size()));
  CHECK(std::abs(mean - model.mean()) <= 3.0 * se_mean);
  double m4 = (big.array() - mean).pow(4).mean();
  double se_var = std::sqrt((m4 - var * var) / static_cast<double>(big.size()));
  CHECK(std::abs(var - model.variance()) <= 3.0 * se_var);
}

TEST_CASE("empirical stats: quartiles and histogram") {
  Eigen::VectorXd five(5);
  five << 1, 2, 3, 4, 5;
  EmpiricalStats st = empirical_stats(five, 4);
  CHECK(st.q50 == doctest::Approx(3.0));
  CHECK(st.q25 == doctest::Approx(2.0));
  CHECK(st.q75 == doctest::Approx(4.0));

  Eigen::VectorXd constant = Eigen::VectorXd::Constant(10, 7.0);
  EmpiricalStats cst = empirical_stats(constant, 5);
  CHECK(cst.q25 == 7.0);
  CHECK(cst.q50 == 7.0);
  CHECK(cst.q75 == 7.0);
  int occupied = 0;
  for (double d : cst.density)
    if (d > 0.0) ++occupied;
  CHECK(occupied == 1);

  CHECK_THROWS_AS(empirical_stats(Eigen::VectorXd(), 10), Error);

  // Uniform[0,1] million-draw oracle: quartiles within 0.005 of 1/4, 1/2, 3/4.
  RandomStream stream(2026);
  Eigen::VectorXd u(1000000);
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = stream.uniform01();
  EmpiricalStats ust = empirical_stats(u);
  CHECK(ust.q25 == doctest::Approx(0.25).epsilon(0.02));
  CHECK(std::abs(ust.q25 - 0.25) <= 0.005);
  CHECK(std::abs(ust.q50 - 0.50) <= 0.005);
  CHECK(std::abs(ust.q75 - 0.75) <= 0.005);

  // Histogram integrates to one.
  double area = 0.0;
  for (std::size_t b = 0; b < ust.density.size(); ++b)
    area += ust.density[b] * (ust.bin_edges[b + 1] - ust.bin_edges[b]);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("model files round-trip losslessly") {
  PceModel model = random_model(4, 3, BasisFamily::Hermite, 31337);
  std::stringstream ss;
  model.save(ss);
  PceModel back = PceModel::load(ss);
  CHECK(back.family() == model.family());
  CHECK(back.dimension() == model.dimension());
  REQUIRE(back.coefficients().size() == model.coefficients().size());
  for (Eigen::Index k = 0; k < model.coefficients().size(); ++k)
    CHECK(back.coefficients()[k] == model.coefficients()[k]);  // bit-exact
}
