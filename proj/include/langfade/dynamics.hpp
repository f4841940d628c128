#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace langfade {

/// Discrete norm-change model: each year a fraction c of writers use -ra
/// unconditionally; of the rest, a fraction gamma follows the enforcement
/// targets (e_r, e_s) and the others resample the current distribution.
struct DiscreteParams {
  double c = 0.0;
  double gamma = 0.0;
  double e_r = 0.5;
  double e_s = 0.5;

  /// Throws std::invalid_argument unless every field lies in [0, 1].
  void validate() const;
};

struct DiscreteState {
  double r = 0.0;
  double s = 0.0;
};

/// Attention-fading model s(t) = (a t + s0) exp(-t / tau), driven by the
/// forcing E_s(t) = a tau exp(-t / tau). t is in years since t0_year.
struct ContinuousParams {
  double a = 0.0;    // attention amplitude, 1/years
  double tau = 1.0;  // relaxation time, years
  double s0 = 0.0;   // -se fraction at t = 0

  void validate() const;
};

/// Point (s, e_s) of the equivalent 2-D linear system, with e_s = E_s / tau.
struct PhaseState {
  double s = 0.0;
  double e_s = 0.0;
};

DiscreteState step_discrete(const DiscreteState& state, const DiscreteParams& p);

/// Trajectory of n + 1 states starting with `state`.
std::vector<DiscreteState> iterate_discrete(const DiscreteState& state, const DiscreteParams& p,
                                            std::size_t n);

/// Recursion with time-varying enforcement targets; step k uses e_r[k], e_s[k].
/// Both spans must have equal length n; the trajectory has n + 1 states.
std::vector<DiscreteState> iterate_discrete_driven(const DiscreteState& state, double c, double gamma,
                                                   std::span<const double> e_r,
                                                   std::span<const double> e_s);

/// Fixed point of step_discrete. Throws std::invalid_argument when c = 0 and
/// gamma = 0 (every state is fixed).
DiscreteState discrete_fixed_point(const DiscreteParams& p);

double forcing(double t, const ContinuousParams& p);
double closed_form_s(double t, const ContinuousParams& p);

/// Maximum of closed_form_s at t* = tau - s0 / a; nullopt when a = 0 or
/// t* <= 0 (the curve decays monotonically from t = 0).
std::optional<double> peak_time(const ContinuousParams& p);

/// Internal RK4 step used by the integrators: min(0.01 tau, 0.25) years.
double rk4_step_size(double tau);

/// Fixed-step RK4 solution of tau ds/dt = -s + E_s(t), s(0) = s0, sampled on
/// `t_grid` (ascending, starting at 0). Throws std::invalid_argument otherwise.
std::vector<double> integrate_ode(const ContinuousParams& p, std::span<const double> t_grid);

/// Right-hand side of (ds/dt, de_s/dt) = (-s/tau + e_s, -e_s/tau).
PhaseState phase_flow(const PhaseState& state, double tau);

/// RK4 integration of phase_flow from `initial`, sampled on `t_grid`.
std::vector<PhaseState> integrate_phase(const PhaseState& initial, double tau,
                                        std::span<const double> t_grid);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// [[-1/tau, 1], [0, -1/tau]]
Matrix2 system_matrix(double tau);

struct Eigenstructure {
  double eigenvalue = 0.0;
  int algebraic_multiplicity = 0;
  int geometric_multiplicity = 0;
  double shifted_max_abs = 0.0;  // max |(A - lambda I)_ij|
  double nilpotent_residual = 0.0;  // max |((A - lambda I)^2)_ij|
  bool critically_damped() const {
    return algebraic_multiplicity == 2 && geometric_multiplicity == 1;
  }
};

/// Spectral analysis of system_matrix(tau), computed from the matrix itself.
Eigenstructure eigenstructure(double tau);

}  // namespace langfade
