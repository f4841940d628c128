#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "langfade/error.hpp"
#include "langfade/fit.hpp"

using namespace langfade;

namespace {

FractionSeries noiseless(const ContinuousParams& p, const std::string& lemma = "v") {
  FractionSeries s{lemma, 1750, {}};
  for (int t = 0; t <= 250; ++t) s.points.push_back({double(t), closed_form_s(t, p), 1000});
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("fit_verb recovers a noiseless curve") {
  const auto fit = fit_verb(noiseless({0.027, 50.0, 0.3}), 0.027);
  CHECK(rel(fit.params.s0, 0.3) < 1e-4);
  CHECK(rel(fit.params.tau, 50.0) < 1e-4);
  CHECK(fit.sse < 1e-10);
  CHECK(fit.n_points == 251);
  CHECK_FALSE(fit.tau_at_bound);
  CHECK(fit.converged_starts > 0);
  // peak at t = 50 - 0.3 / 0.027
  CHECK(fit.max_model_value == doctest::Approx(closed_form_s(50.0 - 0.3 / 0.027, {0.027, 50.0, 0.3})).epsilon(1e-4));
}

TEST_CASE("fit_verb on an all-zero series runs to the lower tau bound") {
  FractionSeries zero{"zero", 1750, {}};
  for (int t = 0; t <= 250; ++t) zero.points.push_back({double(t), 0.0, 1000});
  const auto fit = fit_verb(zero, 0.027);
  CHECK(fit.params.s0 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.params.tau == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.tau_at_bound);
  double expected = 0.0;
  for (int t = 0; t <= 250; ++t) expected += std::pow(0.027 * t * std::exp(-t / 1.0), 2);
  CHECK(fit.sse == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("fit_verb preconditions") {
  FractionSeries tiny{"tiny", 1750, {{0, 0.1, 10}, {1, 0.2, 10}}};
  CHECK_THROWS_AS(fit_verb(tiny, 0.01), FitError);
  tiny.points.push_back({2, 0.2, 10});
  CHECK_NOTHROW(fit_verb(tiny, 0.01));
}

TEST_CASE("fit_verb recovers parameters from binomial data") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.005, 0.03), ut(10.0, 150.0), us(0.1, 0.7);
  int done = 0;
  std::uint64_t seed = 0;
  while (done < 20) {
    const ContinuousParams p{ua(rng), ut(rng), us(rng)};
    const auto peak = peak_time(p);
    const double top = peak && *peak < 250 ? closed_form_s(*peak, p) : p.s0;
    if (top > 0.95) continue;
    ++done;
    const auto series = synth_series(p, 1000, {1750, 2000}, ++seed);
    const auto fit = fit_verb(series, p.a);
    CHECK(rel(fit.params.tau, p.tau) < 0.15);
    CHECK(std::abs(fit.params.s0 - p.s0) < 0.05);
  }
}

TEST_CASE("fit_verb is robust to missing years") {
  const ContinuousParams p{0.02, 60.0, 0.25};
  auto series = noiseless(p);
  std::mt19937_64 rng(8);
  std::shuffle(series.points.begin(), series.points.end(), rng);
  series.points.resize(series.points.size() * 4 / 5);
  std::sort(series.points.begin(), series.points.end(), [](auto& x, auto& y) { return x.t < y.t; });
  const auto fit = fit_verb(series, p.a);
  CHECK(rel(fit.params.tau, p.tau) < 1e-3);
  CHECK(rel(fit.params.s0, p.s0) < 1e-3);
}

TEST_CASE("binomial weighting still recovers noiseless curves") {
  FitOptions opt;
  opt.weighting = Weighting::kBinomial;
  const auto fit = fit_verb(noiseless({0.01, 80.0, 0.4}), 0.01, opt);
  CHECK(rel(fit.params.tau, 80.0) < 1e-4);
  CHECK(rel(fit.params.s0, 0.4) < 1e-4);
}

TEST_CASE("fit_global") {
  SUBCASE("single noiseless verb") {
    const std::vector<FractionSeries> set{noiseless({0.027, 50.0, 0.3})};
    const auto grid = default_a_grid();
    const auto g = fit_global(set, grid);
    CHECK(std::abs(g.a - 0.027) < 1e-4);
    REQUIRE(g.verb_fits.size() == 1);
    CHECK(g.grid_sse.size() == grid.size());
    for (const auto& [a, sse] : g.grid_sse) CHECK(g.total_sse <= sse);
  }
  SUBCASE("ten noisy verbs") {
    std::vector<FractionSeries> set;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ut(15.0, 30.0), us(0.1, 0.4);
    for (int i = 0; i < 10; ++i) {
      set.push_back(synth_series({0.03, ut(rng), us(rng)}, 500, {1750, 2000}, 100 + i, 1750, "v" + std::to_string(i)));
    }
    const auto g = fit_global(set, make_grid(0.0, 0.06, 0.002));
    CHECK(g.a >= 0.025);
    CHECK(g.a <= 0.035);
    double sum = 0.0;
    for (const auto& f : g.verb_fits) sum += f.sse;
    CHECK(std::abs(sum - g.total_sse) <= 1e-9 * g.total_sse);
    for (const auto& point : g.grid_sse) CHECK(g.total_sse <= point.second);
    CHECK(g.verb_fits[3].lemma == "v3");

    const auto again = fit_global(set, make_grid(0.0, 0.06, 0.002));
    CHECK(again.a == g.a);
    CHECK(again.total_sse == g.total_sse);
  }
  SUBCASE("single grid point") {
    const std::vector<FractionSeries> set{noiseless({0.02, 40.0, 0.2})};
    const std::vector<double> grid{0.015};
    CHECK(fit_global(set, grid).a == 0.015);
  }
  SUBCASE("errors") {
    const std::vector<FractionSeries> none;
    const std::vector<double> grid{0.01, 0.02};
    CHECK_THROWS(fit_global(none, grid));
    const std::vector<FractionSeries> set{noiseless({0.02, 40.0, 0.2})};
    CHECK_THROWS(fit_global(set, std::vector<double>{}));
    CHECK_THROWS(fit_global(set, std::vector<double>{0.02, 0.01}));
    std::vector<FractionSeries> with_bad = set;
    with_bad.push_back({"bad", 1750, {{0, 0.1, 5}}});
    CHECK_THROWS_AS(fit_global(with_bad, grid), FitError);
    FitOptions drop;
    drop.drop_failed_verbs = true;
    const auto g = fit_global(with_bad, grid, drop);
    REQUIRE(g.failed.size() == 1);
    CHECK(g.failed[0] == "bad");
    CHECK(g.verb_fits.size() == 1);
  }
}

TEST_CASE("bootstrap_a") {
  const auto grid = make_grid(0.0, 0.05, 0.005);
  const auto base = synth_series({0.02, 40.0, 0.3}, 1000, {1750, 2000}, 7);
  SUBCASE("one repetition is degenerate") {
    const std::vector<FractionSeries> set{base, base};
    const auto b = bootstrap_a(set, 1, 2, 0, grid);
    CHECK(b.degenerate);
    CHECK(b.sd == 0.0);
    CHECK(b.samples.size() == 1);
    CHECK(b.mean == b.samples[0]);
  }
  SUBCASE("identical copies have no spread") {
    const std::vector<FractionSeries> set{base, base, base, base};
    const auto b = bootstrap_a(set, 10, 2, 3, grid);
    CHECK_FALSE(b.degenerate);
    CHECK(b.samples.size() == 10);
    CHECK(b.sd < 1e-6);
  }
  SUBCASE("reproducible from the seed") {
    std::vector<FractionSeries> set;
    for (int i = 0; i < 5; ++i) set.push_back(synth_series({0.02, 30.0 + 5 * i, 0.3}, 300, {1750, 2000}, 50 + i));
    const auto b1 = bootstrap_a(set, 6, 2, 42, grid);
    const auto b2 = bootstrap_a(set, 6, 2, 42, grid);
    CHECK(b1.samples == b2.samples);
  }
  SUBCASE("preconditions") {
    const std::vector<FractionSeries> set{base};
    CHECK_THROWS(bootstrap_a(set, 0, 1, 0, grid));
    CHECK_THROWS(bootstrap_a(set, 2, 2, 0, grid));
  }
}

TEST_CASE("synth_series") {
  const ContinuousParams p{0.02, 40.0, 0.3};
  const auto big = synth_series(p, 1000000, {1750, 2000}, 1);
  REQUIRE(big.points.size() == 251);
  for (const auto& pt : big.points) CHECK(std::abs(pt.s - closed_form_s(pt.t, p)) < 0.005);

  const auto zero = synth_series({0.0, 40.0, 0.0}, 100, {1750, 1800}, 2);
  for (const auto& pt : zero.points) CHECK(pt.s == 0.0);

  const auto a = synth_series(p, 500, {1750, 2000}, 9);
  const auto b = synth_series(p, 500, {1750, 2000}, 9);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].s == b.points[i].s);

  const auto shifted = synth_series(p, 10, {1700, 1705}, 9, 1700, "x");
  CHECK(shifted.lemma == "x");
  CHECK(shifted.points.front().t == 0.0);
  CHECK_THROWS_AS(synth_series(p, 0, {1750, 1760}, 0), std::invalid_argument);
  const std::map<int, std::uint64_t> sparse{{1750, 10}, {1760, 0}, {1770, 20}};
  CHECK(synth_series(p, sparse, 0).points.size() == 2);
}

TEST_CASE("grids") {
  const auto g = default_a_grid();
  CHECK(g.size() == 101);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(0.1));
  CHECK(make_grid(1, 1, 0.5).size() == 1);
  CHECK_THROWS(make_grid(1, 0, 0.5));
}
