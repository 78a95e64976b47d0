#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "pcx/design.hpp"
#include "pcx/multi_index.hpp"
#include "pcx/polynomial.hpp"
#include "pcx/rng.hpp"

using namespace pcx;

namespace {

// Independent enumeration oracle: every vector in {0..l}^n summing to <= l,
// counted without any ordering logic.
int oracle_count(int n, int lbar) {
  std::vector<int> v(static_cast<std::size_t>(n), 0);
  int count = 0;
  while (true) {
    int sum = 0;
    for (int e : v) sum += e;
    if (sum <= lbar) ++count;
    int i = 0;
    while (i < n) {
      if (++v[static_cast<std::size_t>(i)] <= lbar) break;
      v[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return count;
}

}  // namespace

TEST_CASE("count_terms matches the closed form") {
  CHECK(count_terms(3, 2) == 10);
  CHECK(count_terms(13, 2) == 105);
  CHECK(count_terms(12, 3) == 455);
  CHECK(count_terms(16, 3) == 969);
  CHECK(count_terms(5, 0) == 1);
  CHECK(count_terms(1, 3) == 4);
}

TEST_CASE("count_terms overflow is reported, never wrapped") {
  CHECK_THROWS_AS(count_terms(400, 200), std::overflow_error);
}

TEST_CASE("count_terms equals exhaustive enumeration for n <= 6, lbar <= 4") {
  for (int n = 1; n <= 6; ++n)
    for (int l = 0; l <= 4; ++l)
      CHECK(count_terms(n, l) == static_cast<std::uint64_t>(oracle_count(n, l)));
}

TEST_CASE("enumeration reproduces the reference ordering for n=3, lbar=2") {
  MultiIndexSet set(3, 2);
  std::vector<std::vector<int>> expected = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
      {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  REQUIRE(set.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    CHECK(set[k].exponents == expected[k]);
}

TEST_CASE("enumeration edge cases") {
  MultiIndexSet one_dim(1, 3);
  REQUIRE(one_dim.size() == 4);
  for (int d = 0; d <= 3; ++d) CHECK(one_dim[static_cast<std::size_t>(d)].exponents == std::vector<int>{d});

  MultiIndexSet low(2, 1);
  REQUIRE(low.size() == 3);
  CHECK(low[0].exponents == std::vector<int>{0, 0});
  CHECK(low[1].exponents == std::vector<int>{1, 0});
  CHECK(low[2].exponents == std::vector<int>{0, 1});
}

TEST_CASE("enumeration is graded, duplicate-free and complete") {
  for (int n = 1; n <= 6; ++n) {
    for (int l = 0; l <= 4; ++l) {
      MultiIndexSet set(n, l);
      CHECK(set.size() == count_terms(n, l));
      CHECK(set[0].total_degree == 0);
      std::set<std::vector<int>> seen;
      for (std::size_t k = 0; k < set.size(); ++k) {
        CHECK(set[k].total_degree ==
              std::accumulate(set[k].exponents.begin(), set[k].exponents.end(), 0));
        CHECK(set[k].total_degree <= l);
        if (k > 0) CHECK(set[k - 1].total_degree <= set[k].total_degree);
        seen.insert(set[k].exponents);
      }
      CHECK(seen.size() == set.size());
    }
  }
}

TEST_CASE("multi-index set round-trips through the text format") {
  MultiIndexSet set(4, 3);
  std::stringstream ss;
  set.write(ss);
  MultiIndexSet back = MultiIndexSet::read(ss);
  REQUIRE(back.size() == set.size());
  for (std::size_t k = 0; k < set.size(); ++k) CHECK(back[k].exponents == set[k].exponents);
}

TEST_CASE("univariate evaluations at pinned points") {
  CHECK(eval_univariate(BasisFamily::Legendre, 0, 0.37) == 1.0);
  CHECK(eval_univariate(BasisFamily::Legendre, 1, 0.7) == doctest::Approx(0.7));
  // (3/2) * 1 * 1 - (1/2) * 1 by the recursion
  CHECK(eval_univariate(BasisFamily::Legendre, 2, 1.0) == doctest::Approx(1.0));
  CHECK(eval_univariate(BasisFamily::Legendre, 2, 0.0) == doctest::Approx(-0.5));
  // He_2(0) = 0*0 - 1*1
  CHECK(eval_univariate(BasisFamily::Hermite, 2, 0.0) == doctest::Approx(-1.0));
  CHECK(eval_univariate(BasisFamily::Hermite, 1, 1.3) == doctest::Approx(1.3));
  // He_3(t) = t^3 - 3t
  CHECK(eval_univariate(BasisFamily::Hermite, 3, 2.0) == doctest::Approx(8.0 - 6.0));
}

TEST_CASE("Legendre values stay within [-1, 1] on the interval") {
  for (int d = 0; d <= 10; ++d) {
    for (int i = 0; i <= 2000; ++i) {
      double theta = -1.0 + 2.0 * i / 2000.0;
      double v = eval_univariate(BasisFamily::Legendre, d, theta);
      CHECK(std::abs(v) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("multivariate evaluation is the product of univariate factors") {
  MultiIndex mi{{1, 1, 0}, 2};
  Eigen::VectorXd theta(3);
  theta << 0.5, 0.2, 0.9;
  CHECK(eval_multivariate(mi, BasisFamily::Legendre, theta) == doctest::Approx(0.10));

  MultiIndex zeros{{0, 0, 0}, 0};
  CHECK(eval_multivariate(zeros, BasisFamily::Legendre, theta) == 1.0);

  MultiIndex mixed{{2, 1}, 3};
  Eigen::VectorXd theta2(2);
  theta2 << 1.0, 0.3;
  CHECK(eval_multivariate(mixed, BasisFamily::Legendre, theta2) == doctest::Approx(0.3));

  Eigen::VectorXd wrong(2);
  wrong << 0.1, 0.2;
  CHECK_THROWS_AS(eval_multivariate(mi, BasisFamily::Legendre, wrong), DimensionError);
}

TEST_CASE("norms: Legendre closed form, constant term unit") {
  CHECK(norm_sq(MultiIndex{{1, 1, 0}, 2}, BasisFamily::Legendre) == doctest::Approx(1.0 / 9.0));
  CHECK(norm_sq(MultiIndex{{0, 0, 0}, 0}, BasisFamily::Legendre) == 1.0);
  CHECK(norm_sq(MultiIndex{{0, 0}, 0}, BasisFamily::Hermite) == 1.0);
  CHECK(norm_sq(MultiIndex{{3}, 3}, BasisFamily::Hermite) == 6.0);
}

TEST_CASE("Hermite norm E[He_2^2 He_1^2] = 2 against a Monte Carlo oracle") {
  // Quadrature oracle: 1e6 standard-normal pairs, tolerance 1%.
  RandomStream stream(123456789u);
  const long n = 1000000;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    double t1 = stream.normal();
    double t2 = stream.normal();
    double he2 = t1 * t1 - 1.0;
    double v = he2 * t2;
    acc += v * v;
  }
  double mc = acc / static_cast<double>(n);
  double exact = norm_sq(MultiIndex{{2, 1}, 3}, BasisFamily::Hermite);
  CHECK(exact == doctest::Approx(2.0));
  CHECK(mc == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("orthogonality spot check: Legendre n=2 up to degree 3") {
  MultiIndexSet set(2, 3);
  BasisEvaluator eval(set, BasisFamily::Legendre);
  auto ws = eval.workspace();
  const auto L = static_cast<std::size_t>(eval.terms());
  const long n = 400000;
  std::vector<double> sum(L * L, 0.0), sum_sq(L * L, 0.0);
  std::vector<double> row(L);
  RandomStream stream(97531u);
  Eigen::VectorXd theta(2);
  for (long s = 0; s < n; ++s) {
    theta << stream.uniform_sym(), stream.uniform_sym();
    eval.row(theta, ws, row.data());
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = i; j < L; ++j) {
        double p = row[i] * row[j];
        sum[i * L + j] += p;
        sum_sq[i * L + j] += p * p;
      }
  }
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i; j < L; ++j) {
      double mean = sum[i * L + j] / n;
      double var = sum_sq[i * L + j] / n - mean * mean;
      double se = std::sqrt(var / n);
      double expected = i == j ? eval.norms_sq()[static_cast<Eigen::Index>(i)] : 0.0;
      CHECK(std::abs(mean - expected) <= 3.5 * se + 1e-12);
    }
  }
}

TEST_CASE("design matrix rows are the polynomial vector at each sample") {
  MultiIndexSet set(1, 2);
  Eigen::MatrixXd samples(1, 1);
  samples << 0.0;
  DesignMatrix d = build_design_matrix(samples, set, BasisFamily::Legendre);
  REQUIRE(d.phi.rows() == 1);
  REQUIRE(d.phi.cols() == 3);
  CHECK(d.phi(0, 0) == 1.0);
  CHECK(d.phi(0, 1) == 0.0);
  CHECK(d.phi(0, 2) == doctest::Approx(-0.5));
  CHECK(d.column_norms_sq[0] == 1.0);
  CHECK(d.column_norms_sq[1] == doctest::Approx(1.0 / 3.0));

  Eigen::MatrixXd empty(0, 1);
  DesignMatrix d0 = build_design_matrix(empty, set, BasisFamily::Legendre);
  CHECK(d0.phi.rows() == 0);
  CHECK(d0.phi.cols() == 3);

  MultiIndexSet big(13, 2);
  Eigen::MatrixXd s30 = Eigen::MatrixXd::Constant(30, 13, 0.25);
  DesignMatrix d30 = build_design_matrix(s30, big, BasisFamily::Legendre);
  CHECK(d30.phi.rows() == 30);
  CHECK(d30.phi.cols() == 105);
  CHECK((d30.phi.col(0).array() == 1.0).all());
}
