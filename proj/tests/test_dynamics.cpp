#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "langfade/dynamics.hpp"

using namespace langfade;

namespace {
std::vector<double> grid(double hi, double step) {
  std::vector<double> g;
  for (long i = 0; static_cast<double>(i) * step <= hi + 1e-12; ++i) g.push_back(static_cast<double>(i) * step);
  return g;
}
}  // namespace

TEST_CASE("step_discrete") {
  CHECK(step_discrete({0.3, 0.7}, {0.0, 1.0, 0.5, 0.5}).s == 0.5);
  const auto full_bias = step_discrete({0.3, 0.7}, {1.0, 0.4, 0.5, 0.5});
  CHECK(full_bias.r == 1.0);
  CHECK(full_bias.s == 0.0);
  CHECK(step_discrete({0.6, 0.4}, {0.1, 0.5, 0.5, 0.5}).s == doctest::Approx(0.405).epsilon(1e-14));
}

TEST_CASE("iterate_discrete") {
  const DiscreteParams sym{0.0, 0.2, 0.5, 0.5};
  CHECK(iterate_discrete({0.1, 0.9}, sym, 0).size() == 1);
  const auto traj = iterate_discrete({0.1, 0.9}, sym, 400);
  CHECK(traj.size() == 401);
  CHECK(traj.back().s == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(traj[1].s == step_discrete(traj[0], sym).s);

  const auto biased = iterate_discrete({0.3, 0.7}, {0.1, 0.5, 0.5, 0.5}, 200);
  CHECK(std::abs(biased.back().r - 0.5909090909090909) < 1e-12);
  CHECK(std::abs(biased.back().s - 0.4090909090909091) < 1e-12);

  CHECK_THROWS_AS(iterate_discrete({0.5, 0.5}, {1.5, 0.5, 0.5, 0.5}, 3), std::invalid_argument);
}

TEST_CASE("discrete_fixed_point") {
  CHECK(discrete_fixed_point({0.0, 0.3, 0.5, 0.5}).s == doctest::Approx(0.5).epsilon(1e-14));
  // frozen from 2000 Python iterations of the recursion
  const auto fp = discrete_fixed_point({0.1, 0.5, 0.5, 0.5});
  CHECK(std::abs(fp.r - 0.5909090909090909) < 1e-12);
  CHECK(std::abs(fp.s - 0.4090909090909091) < 1e-12);
  CHECK_THROWS_AS(discrete_fixed_point({0.0, 0.0, 0.5, 0.5}), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const DiscreteParams p{u(rng), 0.01 + 0.99 * u(rng), u(rng), u(rng)};
    const auto f = discrete_fixed_point(p);
    const auto g = step_discrete(f, p);
    CHECK(std::abs(g.r - f.r) < 1e-12);
    CHECK(std::abs(g.s - f.s) < 1e-12);
  }
}

TEST_CASE("discrete model conserves r + s and contracts geometrically") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double e_s = u(rng);
    const DiscreteParams p{u(rng), 0.01 + 0.98 * u(rng), 1.0 - e_s, e_s};
    const double s_init = u(rng);
    const auto traj = iterate_discrete({1.0 - s_init, s_init}, p, 300);
    const auto fp = discrete_fixed_point(p);
    const double ratio = (1.0 - p.c) * (1.0 - p.gamma);
    for (std::size_t n = 0; n < traj.size(); ++n) {
      REQUIRE(std::abs(traj[n].r + traj[n].s - 1.0) < 1e-12);
      const double bound = std::abs(traj[0].s - fp.s) * std::pow(ratio, static_cast<double>(n)) + 1e-10;
      REQUIRE(std::abs(traj[n].s - fp.s) <= bound);
    }
  }
}

TEST_CASE("forcing") {
  const ContinuousParams p{0.02, 43.0, 0.1};
  CHECK(forcing(0.0, p) == doctest::Approx(0.86).epsilon(1e-14));
  CHECK(forcing(43.0, p) == doctest::Approx(0.86 / std::exp(1.0)).epsilon(1e-14));
  // forcing stays a fraction (<= 1) exactly when tau <= 1/a
  CHECK(forcing(0.0, {0.02, 50.0, 0.1}) <= 1.0);
  CHECK(forcing(0.0, {0.02, 50.01, 0.1}) > 1.0);
}

TEST_CASE("closed_form_s and peak_time") {
  CHECK(closed_form_s(0.0, {0.027, 43.0, 0.2}) == 0.2);
  CHECK(closed_form_s(30.0, {0.0, 30.0, 0.6}) == doctest::Approx(0.6 / std::exp(1.0)).epsilon(1e-14));

  const ContinuousParams p{0.027, 43.0, 0.2};
  const auto t_star = peak_time(p);
  REQUIRE(t_star.has_value());
  // dense-grid argmax oracle (0.001 yr on [0, 250]): t = 35.593, value 0.5074013309
  CHECK(std::abs(*t_star - 35.593) < 0.001);
  CHECK(std::abs(closed_form_s(*t_star, p) - 0.5074013309510501) < 1e-9);

  CHECK_FALSE(peak_time({0.0, 43.0, 0.2}).has_value());
  CHECK(*peak_time({0.02, 43.0, 0.0}) == 43.0);
  CHECK_FALSE(peak_time({0.001, 43.0, 0.9}).has_value());  // tau < s0/a
}

TEST_CASE("closed form solves the forced relaxation equation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ua(0.0, 0.1), ut(5.0, 200.0), us(0.0, 1.0);
  for (int draw = 0; draw < 100; ++draw) {
    const ContinuousParams p{ua(rng), ut(rng), us(rng)};
    const double h = 0.01;
    double worst = 0.0;
    for (double t = h; t <= 250.0; t += 0.37) {
      const double ds = (closed_form_s(t + h, p) - closed_form_s(t - h, p)) / (2 * h);
      worst = std::max(worst, std::abs(p.tau * ds + closed_form_s(t, p) - forcing(t, p)));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("integrate_ode") {
  const auto g = grid(250.0, 1.0);
  const ContinuousParams p{0.027, 43.0, 0.2};
  const auto s = integrate_ode(p, g);
  REQUIRE(s.size() == g.size());
  CHECK(s[0] == 0.2);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(s[i] - closed_form_s(g[i], p)));
  CHECK(worst < 1e-6);

  const std::vector<double> one{0.0, 17.0};
  CHECK(std::abs(integrate_ode({0.0, 17.0, 1.0}, one)[1] - std::exp(-1.0)) < 1e-6);

  const std::vector<double> bad{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(integrate_ode(p, bad), std::invalid_argument);
  const std::vector<double> late{1.0, 2.0};
  CHECK_THROWS_AS(integrate_ode(p, late), std::invalid_argument);
  CHECK(rk4_step_size(10.0) == 0.1);
  CHECK(rk4_step_size(100.0) == 0.25);
}

TEST_CASE("phase_flow and the equivalent linear system") {
  const auto zero = phase_flow({0.0, 0.0}, 43.0);
  CHECK(zero.s == 0.0);
  CHECK(zero.e_s == 0.0);
  CHECK(phase_flow({0.0, 0.027}, 43.0).s == 0.027);

  const ContinuousParams p{0.027, 43.0, 0.2};
  const auto g = grid(250.0, 0.5);
  const auto traj = integrate_phase({p.s0, p.a}, p.tau, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(traj[i].s - closed_form_s(g[i], p)) < 1e-6);
    CHECK(std::abs(traj[i].e_s - forcing(g[i], p) / p.tau) < 1e-9);
  }
}

TEST_CASE("eigenstructure is critically damped") {
  const auto e1 = eigenstructure(1.0);
  CHECK(e1.eigenvalue == -1.0);
  CHECK(e1.algebraic_multiplicity == 2);
  CHECK(e1.geometric_multiplicity == 1);
  CHECK(e1.critically_damped());
  const auto e43 = eigenstructure(43.0);
  CHECK(e43.eigenvalue == doctest::Approx(-0.023256).epsilon(1e-5));
  for (double tau : {1.0, 43.0, 200.0}) {
    const auto e = eigenstructure(tau);
    CHECK(e.shifted_max_abs > 0.0);
    CHECK(e.nilpotent_residual < 1e-14);
  }
}

TEST_CASE("overshoot and unimodality of the closed form") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ua(0.001, 0.1), ut(5.0, 200.0), us(0.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    const ContinuousParams p{ua(rng), ut(rng), us(rng)};
    const auto t_star = peak_time(p);
    if (!t_star) continue;
    ++checked;
    double max_gap = -1.0;
    double prev = closed_form_s(0.0, p);
    for (double t = 0.05; t <= 250.0; t += 0.05) {
      const double s = closed_form_s(t, p);
      max_gap = std::max(max_gap, s - forcing(t, p));
      if (t + 0.05 < *t_star) {
        REQUIRE(s > prev);
      } else if (t - 0.05 > *t_star) {
        REQUIRE(s < prev);
      }
      prev = s;
    }
    CHECK(max_gap > 0.0);
  }
}

TEST_CASE("discrete recursion tracks the continuum model at tau = 100") {
  const double tau = 100.0;
  for (const ContinuousParams p : {ContinuousParams{0.008, tau, 0.2}, ContinuousParams{0.01, tau, 0.0},
                                   ContinuousParams{0.002, tau, 0.9}}) {
    std::vector<double> e_s, e_r;
    for (int n = 0; n < 250; ++n) {
      e_s.push_back(forcing(n, p));
      e_r.push_back(1.0 - e_s.back());
    }
    const auto traj = iterate_discrete_driven({1.0 - p.s0, p.s0}, 0.0, 1.0 / tau, e_r, e_s);
    double worst = 0.0;
    for (std::size_t n = 0; n < traj.size(); ++n) {
      worst = std::max(worst, std::abs(traj[n].s - closed_form_s(static_cast<double>(n), p)));
    }
    CHECK(worst < 0.02);
  }
}
