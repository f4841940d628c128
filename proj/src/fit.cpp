#include "langfade/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "langfade/error.hpp"
#include "langfade/kernels.hpp"

namespace langfade {
namespace {

using Vec = std::array<double, 2>;  // (s0, log tau)

struct Problem {
  std::vector<double> t;
  std::vector<double> s;
  std::vector<double> w;  // empty when unweighted
  double a = 0.0;
  double lo_u = 0.0;
  double hi_u = 0.0;

  Vec clamp(Vec x) const { return {std::clamp(x[0], 0.0, 1.0), std::clamp(x[1], lo_u, hi_u)}; }
  double operator()(const Vec& x) const {
    return kernels::decay_sse(t, s, w, a, std::exp(x[1]), x[0]);
  }
};

Problem make_problem(const FractionSeries& series, double a, const FitOptions& options) {
  Problem p;
  p.a = a;
  p.lo_u = std::log(options.tau_min);
  p.hi_u = std::log(options.tau_max);
  p.t.reserve(series.points.size());
  p.s.reserve(series.points.size());
  for (const auto& pt : series.points) {
    p.t.push_back(pt.t);
    p.s.push_back(pt.s);
  }
  if (options.weighting == Weighting::kBinomial) {
    double sum = 0.0;
    for (const auto& pt : series.points) {
      const double n = static_cast<double>(std::max<std::uint64_t>(pt.n_total, 1));
      const double p_hat = (std::round(pt.s * n) + 0.5) / (n + 1.0);
      p.w.push_back(n / (p_hat * (1.0 - p_hat)));
      sum += p.w.back();
    }
    const double mean = sum / static_cast<double>(p.w.size());
    for (double& w : p.w) w /= mean;
  }
  return p;
}

struct SimplexResult {
  Vec x{};
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

SimplexResult nelder_mead(const Problem& obj, Vec start, Vec step, const FitOptions& options) {
  struct Vertex {
    Vec x;
    double f;
  };
  std::array<Vertex, 3> v;
  const Vec x0 = obj.clamp(start);
  v[0] = {x0, obj(x0)};
  const double mid_u = 0.5 * (obj.lo_u + obj.hi_u);
  const Vec x1 = obj.clamp({x0[0] + (x0[0] < 0.5 ? step[0] : -step[0]), x0[1]});
  const Vec x2 = obj.clamp({x0[0], x0[1] + (x0[1] < mid_u ? step[1] : -step[1])});
  v[1] = {x1, obj(x1)};
  v[2] = {x2, obj(x2)};

  auto lerp = [&](const Vec& from, const Vec& to, double k) {
    return obj.clamp({from[0] + k * (to[0] - from[0]), from[1] + k * (to[1] - from[1])});
  };

  SimplexResult res;
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    std::sort(v.begin(), v.end(), [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
    double diam = 0.0;
    for (int i = 1; i < 3; ++i) {
      diam = std::max({diam, std::abs(v[i].x[0] - v[0].x[0]), std::abs(v[i].x[1] - v[0].x[1])});
    }
    if (diam <= options.x_tol || (v[2].f - v[0].f <= options.f_tol && diam <= 1e3 * options.x_tol)) {
      res.converged = true;
      break;
    }
    const Vec c = {0.5 * (v[0].x[0] + v[1].x[0]), 0.5 * (v[0].x[1] + v[1].x[1])};
    const Vec xr = lerp(c, v[2].x, -1.0);
    const double fr = obj(xr);
    if (fr < v[0].f) {
      const Vec xe = lerp(c, v[2].x, -2.0);
      const double fe = obj(xe);
      v[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < v[1].f) {
      v[2] = {xr, fr};
      continue;
    }
    bool accepted = false;
    if (fr < v[2].f) {
      const Vec xc = lerp(c, xr, 0.5);
      const double fc = obj(xc);
      if (fc <= fr) {
        v[2] = {xc, fc};
        accepted = true;
      }
    } else {
      const Vec xc = lerp(c, v[2].x, 0.5);
      const double fc = obj(xc);
      if (fc < v[2].f) {
        v[2] = {xc, fc};
        accepted = true;
      }
    }
    if (!accepted) {
      for (int i = 1; i < 3; ++i) {
        v[i].x = lerp(v[0].x, v[i].x, 0.5);
        v[i].f = obj(v[i].x);
      }
    }
  }
  std::sort(v.begin(), v.end(), [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
  res.x = v[0].x;
  res.f = v[0].f;
  return res;
}

double curve_max(const ContinuousParams& p, double t_first, double t_last) {
  double best = std::max(closed_form_s(t_first, p), closed_form_s(t_last, p));
  if (const auto peak = peak_time(p); peak && *peak > t_first && *peak < t_last) {
    best = std::max(best, closed_form_s(*peak, p));
  }
  return best;
}

bool tied(double f, double g) {
  return std::abs(f - g) <= 1e-12 * std::max(std::abs(f), std::abs(g)) + 1e-300;
}

double total_sse_at(std::span<const FractionSeries> series_set, double a, const FitOptions& options,
                    std::vector<VerbFit>* fits) {
  double total = 0.0;
  if (fits) fits->clear();
  for (const auto& series : series_set) {
    VerbFit fit;
    try {
      fit = fit_verb(series, a, options);
    } catch (const FitError& e) {
      std::ostringstream msg;
      msg << "verb '" << series.lemma << "' at a=" << a << ": " << e.what();
      throw FitError(msg.str());
    }
    total += fit.sse;
    if (fits) fits->push_back(std::move(fit));
  }
  return total;
}

}  // namespace

VerbFit fit_verb(const FractionSeries& series, double a, const FitOptions& options) {
  if (series.points.size() < 3) {
    throw FitError("series '" + series.lemma + "' has " + std::to_string(series.points.size()) +
                   " points; at least 3 are required");
  }
  if (!(a >= 0.0)) throw FitError("a must be >= 0");
  if (!(options.tau_min > 0.0 && options.tau_max > options.tau_min)) {
    throw FitError("invalid tau bounds");
  }
  const Problem obj = make_problem(series, a, options);

  constexpr std::array<double, 4> kS0Starts = {0.0, 0.25, 0.5, 0.75};
  SimplexResult best;
  bool have_best = false;
  int converged = 0;
  int total_iterations = 0;
  for (double s0 : kS0Starts) {
    for (int k = 0; k < 4; ++k) {
      const double u = obj.lo_u + (obj.hi_u - obj.lo_u) * k / 3.0;
      SimplexResult run = nelder_mead(obj, {s0, u}, {0.1, 0.5}, options);
      total_iterations += run.iterations;
      if (!run.converged) continue;
      // A second simplex from the optimum guards against premature collapse.
      const SimplexResult polish = nelder_mead(obj, run.x, {0.02, 0.1}, options);
      total_iterations += polish.iterations;
      if (polish.converged && polish.f <= run.f) run = polish;
      ++converged;
      const bool better = !have_best || (run.f < best.f && !tied(run.f, best.f)) ||
                          (tied(run.f, best.f) && run.x[1] < best.x[1]);
      if (better) {
        best = run;
        have_best = true;
      }
    }
  }
  if (!have_best) {
    std::ostringstream msg;
    msg << "no simplex start converged for '" << series.lemma << "' (a=" << a
        << ", iterations=" << total_iterations << ")";
    throw FitError(msg.str());
  }

  VerbFit fit;
  fit.lemma = series.lemma;
  fit.params = {a, std::exp(best.x[1]), best.x[0]};
  fit.sse = best.f;
  fit.n_points = series.points.size();
  fit.max_model_value = curve_max(fit.params, series.points.front().t, series.points.back().t);
  fit.tau_at_bound = std::abs(fit.params.tau - options.tau_min) <= 1e-6 * options.tau_min ||
                     std::abs(fit.params.tau - options.tau_max) <= 1e-6 * options.tau_max;
  fit.converged_starts = converged;
  return fit;
}

GlobalFit fit_global(std::span<const FractionSeries> series_set, std::span<const double> a_grid,
                     const FitOptions& options) {
  if (series_set.empty()) throw FitError("fit_global: empty series set");
  if (a_grid.empty()) throw FitError("fit_global: empty a grid");
  for (std::size_t i = 1; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > a_grid[i - 1])) throw FitError("fit_global: a grid must be strictly ascending");
  }

  GlobalFit result;
  std::vector<FractionSeries> active(series_set.begin(), series_set.end());
  if (options.drop_failed_verbs) {
    FitOptions strict = options;
    strict.drop_failed_verbs = false;
    // A verb is kept only if it fits at every grid point.
    std::vector<FractionSeries> kept;
    for (const auto& series : active) {
      try {
        for (double a : a_grid) fit_verb(series, a, strict);
        kept.push_back(series);
      } catch (const FitError&) {
        result.failed.push_back(series.lemma);
      }
    }
    active = std::move(kept);
    if (active.empty()) throw FitError("fit_global: every verb failed to fit");
  }

  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    const double total = total_sse_at(active, a_grid[i], options, nullptr);
    result.grid_sse.emplace_back(a_grid[i], total);
    if (total < result.grid_sse[best_idx].second) best_idx = i;
  }

  double best_a = a_grid[best_idx];
  double best_total = result.grid_sse[best_idx].second;
  if (a_grid.size() > 1) {
    double lo = a_grid[best_idx == 0 ? 0 : best_idx - 1];
    double hi = a_grid[std::min(best_idx + 1, a_grid.size() - 1)];
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = total_sse_at(active, x1, options, nullptr);
    double f2 = total_sse_at(active, x2, options, nullptr);
    const double tol = 1e-7 * std::max(1.0, std::abs(hi)) ;
    while (hi - lo > tol) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = total_sse_at(active, x1, options, nullptr);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = total_sse_at(active, x2, options, nullptr);
      }
    }
    const double cand = f1 <= f2 ? x1 : x2;
    const double cand_f = std::min(f1, f2);
    if (cand_f < best_total) {
      best_a = cand;
      best_total = cand_f;
    }
  }

  result.a = best_a;
  result.total_sse = total_sse_at(active, best_a, options, &result.verb_fits);
  return result;
}

BootstrapResult bootstrap_a(std::span<const FractionSeries> series_set, int repetitions,
                            std::size_t subset_size, std::uint64_t seed,
                            std::span<const double> a_grid, const FitOptions& options) {
  if (repetitions < 1) throw FitError("bootstrap_a: repetitions must be >= 1");
  if (subset_size < 1 || subset_size > series_set.size()) {
    throw FitError("bootstrap_a: subset size must be between 1 and the number of verbs");
  }
  BootstrapResult result;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(series_set.size());
  const int max_failures = 10 * repetitions + 10;
  while (static_cast<int>(result.samples.size()) < repetitions) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < subset_size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng)]);
    }
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<long>(subset_size));
    std::sort(chosen.begin(), chosen.end());
    std::vector<FractionSeries> subset;
    subset.reserve(subset_size);
    for (std::size_t idx : chosen) subset.push_back(series_set[idx]);
    try {
      result.samples.push_back(fit_global(subset, a_grid, options).a);
    } catch (const FitError& e) {
      if (++result.failures > max_failures) {
        throw FitError(std::string("bootstrap_a: too many failed repetitions; last error: ") + e.what());
      }
    }
  }
  const double n = static_cast<double>(result.samples.size());
  result.mean = std::accumulate(result.samples.begin(), result.samples.end(), 0.0) / n;
  if (result.samples.size() < 2) {
    result.degenerate = true;
    result.sd = 0.0;
  } else {
    double ss = 0.0;
    for (double x : result.samples) ss += (x - result.mean) * (x - result.mean);
    result.sd = std::sqrt(ss / (n - 1.0));
  }
  return result;
}

FractionSeries synth_series(const ContinuousParams& p, const std::map<int, std::uint64_t>& tokens_by_year,
                            std::uint64_t seed, int t0_year, std::string lemma) {
  p.validate();
  FractionSeries series{std::move(lemma), t0_year, {}};
  std::mt19937_64 rng(seed);
  for (const auto& [year, n] : tokens_by_year) {
    if (n == 0) continue;
    const double t = static_cast<double>(year - t0_year);
    const double prob = std::clamp(closed_form_s(t, p), 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(n, prob);
    const std::uint64_t n_se = draw(rng);
    series.points.push_back({t, static_cast<double>(n_se) / static_cast<double>(n), n});
  }
  return series;
}

FractionSeries synth_series(const ContinuousParams& p, std::uint64_t tokens_per_year, YearRange years,
                            std::uint64_t seed, int t0_year, std::string lemma) {
  if (tokens_per_year < 1) throw std::invalid_argument("tokens_per_year must be >= 1");
  std::map<int, std::uint64_t> tokens;
  for (int y = years.first; y <= years.last; ++y) tokens[y] = tokens_per_year;
  return synth_series(p, tokens, seed, t0_year, std::move(lemma));
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("invalid grid specification");
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

std::vector<double> default_a_grid() { return make_grid(0.0, 0.1, 0.001); }

}  // namespace langfade
