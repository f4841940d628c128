#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace langfade {

enum class RegressionMethod { kOls, kDeming, kPermutationPearson };
std::string_view method_name(RegressionMethod m);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;        // sample Pearson coefficient of (x, y)
  double p_value = 1.0;  // two-sided permutation p-value of r, (k + 1) / (N + 1)
  std::size_t n = 0;
  RegressionMethod method = RegressionMethod::kOls;
};

struct PowerLawFit {
  double beta = 0.0;           // exponent, y = exp(log_intercept) * x^(-beta)
  double log_intercept = 0.0;  // natural log
  double r = 0.0;              // Pearson r of the log-log data
  double p_value = 1.0;
  double slope = 0.0;          // fitted log-log slope (-beta)
  std::size_t n = 0;
};

inline constexpr int kDefaultPermutations = 10000;

/// Sample Pearson coefficient. Throws DataError on length mismatch, n < 3 or
/// zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Two-sided permutation p-value of pearson_r: the fraction of `permutations`
/// seeded shuffles of y with |r| >= |r_observed|, plus-one corrected.
double permutation_p_value(std::span<const double> x, std::span<const double> y, int permutations,
                           std::uint64_t seed);

/// Pearson r with permutation p-value; slope and intercept are the OLS line of y on x.
RegressionResult pearson(std::span<const double> x, std::span<const double> y,
                         int permutations = kDefaultPermutations, std::uint64_t seed = 0);

RegressionResult ols(std::span<const double> x, std::span<const double> y,
                     int permutations = kDefaultPermutations, std::uint64_t seed = 0);

/// Deming regression of y on x with error-variance ratio delta = var(y err) / var(x err).
/// delta -> infinity recovers OLS; delta = 1 is orthogonal regression.
RegressionResult deming(std::span<const double> x, std::span<const double> y, double delta = 1.0,
                        int permutations = kDefaultPermutations, std::uint64_t seed = 0);

/// Deming fit of log tau on log nu; beta = -slope.
PowerLawFit power_law_fit(std::span<const double> taus, std::span<const double> nus, double delta = 1.0,
                          int permutations = kDefaultPermutations, std::uint64_t seed = 0);

/// OLS of log frequency on log rank (rank = position + 1) for a descending
/// frequency list; beta is the Zipf exponent.
PowerLawFit zipf_fit(std::span<const double> frequencies, int permutations = kDefaultPermutations,
                     std::uint64_t seed = 0);

}  // namespace langfade
