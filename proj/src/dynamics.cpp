#include "langfade/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace langfade {
namespace {

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

void require_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) return;
  if (t_grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("time grid must be strictly ascending");
    }
  }
}

// Generic fixed-step RK4 over a sampling grid; `rhs(t, y)` returns dy/dt.
template <typename State, typename Rhs>
std::vector<State> rk4_sample(State y, std::span<const double> t_grid, double h_max, Rhs rhs) {
  std::vector<State> out;
  out.reserve(t_grid.size());
  if (t_grid.empty()) return out;
  out.push_back(y);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    const auto steps = static_cast<long>(std::ceil(span / h_max - 1e-12));
    const double h = span / static_cast<double>(std::max(1L, steps));
    double t = t_grid[k - 1];
    for (long i = 0; i < std::max(1L, steps); ++i) {
      const State k1 = rhs(t, y);
      const State k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
      const State k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
      const State k4 = rhs(t + h, y + h * k3);
      y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = t_grid[k - 1] + static_cast<double>(i + 1) * h;
    }
    out.push_back(y);
  }
  return out;
}

struct Vec2 {
  double x, y;
  friend Vec2 operator+(Vec2 u, Vec2 v) { return {u.x + v.x, u.y + v.y}; }
  friend Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }
};

}  // namespace

void DiscreteParams::validate() const {
  require_unit(c, "c");
  require_unit(gamma, "gamma");
  require_unit(e_r, "e_r");
  require_unit(e_s, "e_s");
}

void ContinuousParams::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("a must be >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be > 0");
  require_unit(s0, "s0");
}

DiscreteState step_discrete(const DiscreteState& state, const DiscreteParams& p) {
  const double keep = 1.0 - p.c;
  return {keep * (p.gamma * p.e_r + (1.0 - p.gamma) * state.r) + p.c,
          keep * (p.gamma * p.e_s + (1.0 - p.gamma) * state.s)};
}

std::vector<DiscreteState> iterate_discrete(const DiscreteState& state, const DiscreteParams& p,
                                            std::size_t n) {
  p.validate();
  std::vector<DiscreteState> traj;
  traj.reserve(n + 1);
  traj.push_back(state);
  for (std::size_t k = 0; k < n; ++k) traj.push_back(step_discrete(traj.back(), p));
  return traj;
}

std::vector<DiscreteState> iterate_discrete_driven(const DiscreteState& state, double c, double gamma,
                                                   std::span<const double> e_r,
                                                   std::span<const double> e_s) {
  if (e_r.size() != e_s.size()) throw std::invalid_argument("e_r and e_s lengths differ");
  std::vector<DiscreteState> traj;
  traj.reserve(e_s.size() + 1);
  traj.push_back(state);
  for (std::size_t k = 0; k < e_s.size(); ++k) {
    const DiscreteParams p{c, gamma, e_r[k], e_s[k]};
    p.validate();
    traj.push_back(step_discrete(traj.back(), p));
  }
  return traj;
}

DiscreteState discrete_fixed_point(const DiscreteParams& p) {
  p.validate();
  const double denom = 1.0 - (1.0 - p.c) * (1.0 - p.gamma);
  if (denom == 0.0) {
    throw std::invalid_argument("degenerate parameters: c = 0 and gamma = 0 fix every state");
  }
  return {((1.0 - p.c) * p.gamma * p.e_r + p.c) / denom, (1.0 - p.c) * p.gamma * p.e_s / denom};
}

double forcing(double t, const ContinuousParams& p) {
  return p.a * p.tau * std::exp(-t / p.tau);
}

double closed_form_s(double t, const ContinuousParams& p) {
  return (p.a * t + p.s0) * std::exp(-t / p.tau);
}

std::optional<double> peak_time(const ContinuousParams& p) {
  if (!(p.a > 0.0)) return std::nullopt;
  const double t_star = p.tau - p.s0 / p.a;
  if (!(t_star > 0.0)) return std::nullopt;
  return t_star;
}

double rk4_step_size(double tau) { return std::min(0.01 * tau, 0.25); }

std::vector<double> integrate_ode(const ContinuousParams& p, std::span<const double> t_grid) {
  p.validate();
  require_grid(t_grid);
  return rk4_sample(p.s0, t_grid, rk4_step_size(p.tau),
                    [&](double t, double s) { return (forcing(t, p) - s) / p.tau; });
}

PhaseState phase_flow(const PhaseState& state, double tau) {
  return {-state.s / tau + state.e_s, -state.e_s / tau};
}

std::vector<PhaseState> integrate_phase(const PhaseState& initial, double tau,
                                        std::span<const double> t_grid) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  require_grid(t_grid);
  const auto traj = rk4_sample(Vec2{initial.s, initial.e_s}, t_grid, rk4_step_size(tau),
                               [&](double, Vec2 y) {
                                 const PhaseState d = phase_flow({y.x, y.y}, tau);
                                 return Vec2{d.s, d.e_s};
                               });
  std::vector<PhaseState> out;
  out.reserve(traj.size());
  for (const auto& y : traj) out.push_back({y.x, y.y});
  return out;
}

Matrix2 system_matrix(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  return {{{-1.0 / tau, 1.0}, {0.0, -1.0 / tau}}};
}

Eigenstructure eigenstructure(double tau) {
  const Matrix2 m = system_matrix(tau);
  const double trace = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = trace * trace - 4.0 * det;
  const double scale = std::max({std::abs(m[0][0]), std::abs(m[0][1]), std::abs(m[1][0]),
                                 std::abs(m[1][1])});
  const double tol = 1e-12 * scale * scale;

  Eigenstructure e;
  e.algebraic_multiplicity = std::abs(disc) <= tol ? 2 : 1;
  e.eigenvalue = e.algebraic_multiplicity == 2 ? 0.5 * trace : 0.5 * (trace + std::sqrt(std::max(disc, 0.0)));

  const Matrix2 n = {{{m[0][0] - e.eigenvalue, m[0][1]}, {m[1][0], m[1][1] - e.eigenvalue}}};
  for (const auto& row : n) {
    for (double v : row) e.shifted_max_abs = std::max(e.shifted_max_abs, std::abs(v));
  }
  // rank(A - lambda I) is 0 only for the zero matrix; otherwise 1 at a repeated eigenvalue.
  const int rank = e.shifted_max_abs <= 1e-12 * scale ? 0 : 1;
  e.geometric_multiplicity = 2 - rank;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double v = n[i][0] * n[0][j] + n[i][1] * n[1][j];
      e.nilpotent_residual = std::max(e.nilpotent_residual, std::abs(v));
    }
  }
  return e;
}

}  // namespace langfade
