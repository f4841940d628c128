#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "langfade/error.hpp"
#include "langfade/stats.hpp"

using namespace langfade;

namespace {
std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  return v;
}
}  // namespace

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> a{1, 2, 3}, b{1, -1, 0};
  // sxy = -1/2, sxx = 1, syy = 1
  CHECK(pearson_r(a, b) == doctest::Approx(-0.5).epsilon(1e-14));

  const auto res = pearson(x, x, 999, 1);
  CHECK(res.method == RegressionMethod::kPermutationPearson);
  CHECK(res.slope == doctest::Approx(1.0));
  CHECK(res.intercept == doctest::Approx(0.0));
  CHECK(res.n == 5);
  // 2 of the 120 orderings reach |r| = 1
  CHECK(res.p_value < 0.05);
  CHECK(res.p_value >= 1.0 / 1000.0);

  const std::vector<double> short_x{1, 2}, constant{2, 2, 2};
  CHECK_THROWS_AS(pearson_r(short_x, short_x), DataError);
  CHECK_THROWS_AS(pearson_r(a, constant), DataError);
  CHECK_THROWS_AS(pearson_r(a, x), DataError);
  CHECK(permutation_p_value(a, b, 0, 0) == 1.0);
  CHECK(method_name(RegressionMethod::kDeming) == "deming");
}

TEST_CASE("pearson is invariant under positive affine maps") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(30), y(30), xt(30), yt(30);
    const double ax = std::exp(n01(rng)), bx = 10 * n01(rng);
    const double ay = std::exp(n01(rng)), by = 10 * n01(rng);
    for (int i = 0; i < 30; ++i) {
      x[i] = n01(rng);
      y[i] = 0.3 * x[i] + n01(rng);
      xt[i] = ax * x[i] + bx;
      yt[i] = ay * y[i] + by;
    }
    CHECK(std::abs(pearson_r(x, y) - pearson_r(xt, yt)) < 1e-12);
  }
}

TEST_CASE("permutation p-values are roughly uniform under independence") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01;
  int below = 0;
  for (int d = 0; d < 200; ++d) {
    std::vector<double> x(20), y(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = n01(rng);
      y[i] = n01(rng);
    }
    if (permutation_p_value(x, y, 999, static_cast<std::uint64_t>(d)) < 0.05) ++below;
  }
  const double frac = below / 200.0;
  CHECK(frac >= 0.01);
  CHECK(frac <= 0.10);
}

TEST_CASE("deming") {
  const std::vector<double> x{0, 1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  for (double delta : {0.01, 1.0, 100.0}) {
    const auto d = deming(x, y, delta, 0);
    CHECK(d.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.method == RegressionMethod::kDeming);
  }

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  std::vector<double> nx(50), ny(50);
  for (int i = 0; i < 50; ++i) {
    nx[i] = n01(rng);
    ny[i] = 0.7 * nx[i] + 0.5 * n01(rng);
  }
  const auto xy = deming(nx, ny, 1.0, 0);
  const auto yx = deming(ny, nx, 1.0, 0);
  CHECK(std::abs(xy.slope * yx.slope - 1.0) < 1e-9);

  const auto big = deming(nx, ny, 1e8, 0);
  const auto o = ols(nx, ny, 0);
  CHECK(std::abs(big.slope - o.slope) < 0.01 * std::abs(o.slope));

  CHECK_THROWS_AS(deming(x, y, 0.0, 0), DataError);
  const std::vector<double> cx{1, -1, 1, -1}, cy{1, 1, -1, -1};  // s_xy = 0, s_yy = s_xx
  CHECK_THROWS_AS(deming(cx, cy, 1.0, 0), DataError);
  // s_xy = 0 with s_yy < delta s_xx gives a horizontal line
  CHECK(deming(cx, cy, 4.0, 0).slope == 0.0);
}

TEST_CASE("power_law_fit") {
  const auto nus = log_spaced(1e-8, 1e-4, 40);
  std::vector<double> taus, taus5;
  for (double nu : nus) {
    taus.push_back(std::pow(nu, -0.14));
    taus5.push_back(5 * std::pow(nu, -0.14));
  }
  const auto f = power_law_fit(taus, nus, 1.0, 0);
  CHECK(std::abs(f.beta - 0.14) < 1e-9);
  CHECK(std::abs(f.log_intercept) < 1e-9);
  CHECK(f.slope == doctest::Approx(-0.14));
  CHECK(f.r == doctest::Approx(-1.0));
  const auto f5 = power_law_fit(taus5, nus, 1.0, 0);
  CHECK(std::abs(f5.beta - 0.14) < 1e-9);
  CHECK(std::abs(f5.log_intercept - std::log(5.0)) < 1e-9);

  std::vector<double> bad = taus;
  bad[3] = 0.0;
  CHECK_THROWS_AS(power_law_fit(bad, nus), DataError);
}

TEST_CASE("zipf_fit") {
  std::vector<double> f1, f2;
  for (int r = 1; r <= 100; ++r) {
    f1.push_back(1.0 / r);
    f2.push_back(3.0 / (r * r));
  }
  CHECK(std::abs(zipf_fit(f1, 0).beta - 1.0) < 1e-9);
  const auto z2 = zipf_fit(f2, 0);
  CHECK(std::abs(z2.beta - 2.0) < 1e-9);
  CHECK(std::abs(z2.log_intercept - std::log(3.0)) < 1e-9);
  std::vector<double> unsorted = f1;
  std::swap(unsorted[4], unsorted[5]);
  CHECK_THROWS_AS(zipf_fit(unsorted), DataError);
}
