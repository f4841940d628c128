#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "langfade/dynamics.hpp"
#include "langfade/ingest.hpp"

namespace langfade {

enum class Weighting {
  kNone,      // every year with data counts equally
  kBinomial,  // w_i proportional to n_i / (p_i (1 - p_i)), smoothed p_i, normalized to mean 1
};

struct FitOptions {
  double tau_min = 1.0;
  double tau_max = 500.0;
  Weighting weighting = Weighting::kNone;
  int max_iterations = 4000;  // per simplex run
  double x_tol = 1e-10;       // simplex diameter in (s0, log tau)
  double f_tol = 1e-15;       // absolute spread of vertex objectives
  /// When set, fit_global drops verbs whose fit fails instead of throwing.
  bool drop_failed_verbs = false;
};

struct VerbFit {
  std::string lemma;
  ContinuousParams params;
  double sse = 0.0;
  std::size_t n_points = 0;
  double max_model_value = 0.0;  // max of the fitted curve over the data window
  bool tau_at_bound = false;     // tau within 1e-6 (relative) of tau_min or tau_max
  int converged_starts = 0;
};

struct GlobalFit {
  double a = 0.0;
  double a_sd = 0.0;  // filled from bootstrap_a by callers that run it
  std::vector<VerbFit> verb_fits;
  double total_sse = 0.0;
  std::vector<std::pair<double, double>> grid_sse;  // (a, total sse) per grid point
  std::vector<std::string> failed;                  // verbs dropped (drop_failed_verbs)
};

struct BootstrapResult {
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> samples;
  int failures = 0;         // repetitions redrawn after a fit error
  bool degenerate = false;  // fewer than two samples, sd reported as 0
};

/// Least-squares (s0, tau) for a fixed a. Multistart bounded Nelder-Mead over
/// (s0, log tau) from the 4x4 grid s0 in {0, .25, .5, .75} x log-spaced tau;
/// best start wins, ties go to the smaller tau. Throws FitError with fewer than
/// 3 points or when no start converges.
VerbFit fit_verb(const FractionSeries& series, double a, const FitOptions& options = {});

/// Scans a_grid, fitting every verb at each a; the minimizing grid point is
/// refined by golden-section search between its grid neighbours. The result
/// never has a larger total sse than the best grid point. Verbs are reduced in
/// input order.
GlobalFit fit_global(std::span<const FractionSeries> series_set, std::span<const double> a_grid,
                     const FitOptions& options = {});

/// Repeatedly fits a on random subsets of `subset_size` verbs, drawn without
/// replacement within a repetition. Reproducible from `seed`.
BootstrapResult bootstrap_a(std::span<const FractionSeries> series_set, int repetitions,
                            std::size_t subset_size, std::uint64_t seed,
                            std::span<const double> a_grid, const FitOptions& options = {});

/// Binomial resampling of the model: n_se ~ Binomial(n, clip(closed_form_s(t))).
FractionSeries synth_series(const ContinuousParams& p, std::uint64_t tokens_per_year, YearRange years,
                            std::uint64_t seed, int t0_year = 1750, std::string lemma = "synthetic");
FractionSeries synth_series(const ContinuousParams& p, const std::map<int, std::uint64_t>& tokens_by_year,
                            std::uint64_t seed, int t0_year = 1750, std::string lemma = "synthetic");

/// Inclusive arithmetic grid lo, lo + step, ..., hi (hi included up to rounding).
std::vector<double> make_grid(double lo, double hi, double step);

/// Default a grid: 0 to 0.1 step 0.001.
std::vector<double> default_a_grid();

}  // namespace langfade
