#include "langfade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "langfade/error.hpp"
#include "langfade/kernels.hpp"

namespace langfade {
namespace {

struct Moments {
  double mean_x = 0.0, mean_y = 0.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;  // sample (n - 1) normalized
  std::size_t n = 0;
};

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("x and y have different lengths");
  if (x.size() < 3) throw DataError("at least 3 points are required");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("non-finite input value");
  }
}

Moments moments(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  Moments m;
  m.n = x.size();
  const double n = static_cast<double>(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < m.n; ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  m.sxx /= n - 1.0;
  m.syy /= n - 1.0;
  m.sxy /= n - 1.0;
  return m;
}

double r_of(const Moments& m) {
  if (m.sxx <= 0.0 || m.syy <= 0.0) throw DataError("zero variance in x or y");
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

std::vector<double> centered(std::span<const double> v, double mean) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x -= mean;
  return out;
}

}  // namespace

std::string_view method_name(RegressionMethod m) {
  switch (m) {
    case RegressionMethod::kOls:
      return "ols";
    case RegressionMethod::kDeming:
      return "deming";
    case RegressionMethod::kPermutationPearson:
      return "permutation-pearson";
  }
  return "unknown";
}

double pearson_r(std::span<const double> x, std::span<const double> y) { return r_of(moments(x, y)); }

double permutation_p_value(std::span<const double> x, std::span<const double> y, int permutations,
                           std::uint64_t seed) {
  const Moments m = moments(x, y);
  const double r_obs = r_of(m);
  if (permutations <= 0) return 1.0;
  const std::vector<double> xc = centered(x, m.mean_x);
  std::vector<double> yc = centered(y, m.mean_y);
  // r of a permutation is dot(xc, yc_perm) / norm; the norm is permutation-invariant.
  const double norm = std::sqrt(kernels::dot(xc, xc) * kernels::dot(yc, yc));
  const double threshold = std::abs(r_obs) * (1.0 - 1e-12);
  std::mt19937_64 rng(seed);
  long hits = 0;
  for (int k = 0; k < permutations; ++k) {
    std::shuffle(yc.begin(), yc.end(), rng);
    if (std::abs(kernels::dot(xc, yc) / norm) >= threshold) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(permutations + 1);
}

RegressionResult ols(std::span<const double> x, std::span<const double> y, int permutations,
                     std::uint64_t seed) {
  const Moments m = moments(x, y);
  RegressionResult res;
  res.r = r_of(m);
  res.slope = m.sxy / m.sxx;
  res.intercept = m.mean_y - res.slope * m.mean_x;
  res.p_value = permutation_p_value(x, y, permutations, seed);
  res.n = m.n;
  res.method = RegressionMethod::kOls;
  return res;
}

RegressionResult pearson(std::span<const double> x, std::span<const double> y, int permutations,
                         std::uint64_t seed) {
  RegressionResult res = ols(x, y, permutations, seed);
  res.method = RegressionMethod::kPermutationPearson;
  return res;
}

RegressionResult deming(std::span<const double> x, std::span<const double> y, double delta,
                        int permutations, std::uint64_t seed) {
  if (!(delta > 0.0)) throw DataError("deming: delta must be positive");
  const Moments m = moments(x, y);
  if (m.sxx <= 0.0 && m.syy <= 0.0) throw DataError("deming: both variables are constant");
  const double d = m.syy - delta * m.sxx;
  RegressionResult res;
  if (m.sxy == 0.0) {
    if (d < 0.0) {
      res.slope = 0.0;
    } else {
      throw DataError("deming: slope indeterminate or vertical (s_xy = 0, s_yy >= delta s_xx)");
    }
  } else {
    res.slope = (d + std::sqrt(d * d + 4.0 * delta * m.sxy * m.sxy)) / (2.0 * m.sxy);
  }
  res.intercept = m.mean_y - res.slope * m.mean_x;
  res.r = r_of(m);
  res.p_value = permutation_p_value(x, y, permutations, seed);
  res.n = m.n;
  res.method = RegressionMethod::kDeming;
  return res;
}

PowerLawFit power_law_fit(std::span<const double> taus, std::span<const double> nus, double delta,
                          int permutations, std::uint64_t seed) {
  if (taus.size() != nus.size()) throw DataError("power_law_fit: length mismatch");
  std::vector<double> lx, ly;
  lx.reserve(nus.size());
  ly.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0) || !(nus[i] > 0.0)) throw DataError("power_law_fit: inputs must be positive");
    lx.push_back(std::log(nus[i]));
    ly.push_back(std::log(taus[i]));
  }
  const RegressionResult reg = deming(lx, ly, delta, permutations, seed);
  return {-reg.slope, reg.intercept, reg.r, reg.p_value, reg.slope, reg.n};
}

PowerLawFit zipf_fit(std::span<const double> frequencies, int permutations, std::uint64_t seed) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > 0.0)) throw DataError("zipf_fit: frequencies must be positive");
    if (i > 0 && frequencies[i] > frequencies[i - 1]) {
      throw DataError("zipf_fit: frequencies must be sorted in descending order");
    }
    lx.push_back(std::log(static_cast<double>(i + 1)));
    ly.push_back(std::log(frequencies[i]));
  }
  const Moments m = moments(lx, ly);
  const double slope = m.sxy / m.sxx;
  // Constant frequencies leave r undefined; report 0.
  const double r = m.syy > 0.0 ? r_of(m) : 0.0;
  const double p = m.syy > 0.0 ? permutation_p_value(lx, ly, permutations, seed) : 1.0;
  return {-slope, m.mean_y - slope * m.mean_x, r, p, slope, m.n};
}

}  // namespace langfade
