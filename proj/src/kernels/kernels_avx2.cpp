// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "langfade/kernels.hpp"

namespace langfade::kernels::avx2 {
namespace {

// exp(x) by x = k ln2 + r, |r| <= ln2/2, degree-13 Taylor polynomial in r and
// exponent-field scaling by 2^k. Relative error is a few ulp over the finite range.
inline __m256d exp_pd(__m256d x) {
  const __m256d hi_limit = _mm256_set1_pd(709.78);
  const __m256d lo_limit = _mm256_set1_pd(-708.39);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634074)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(1.42860682030941723212e-6), r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i bits = _mm256_add_epi64(_mm256_cvtepi32_epi64(k32), _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d model4(const double* t, __m256d a, __m256d neg_inv_tau, __m256d s0) {
  const __m256d tv = _mm256_loadu_pd(t);
  return _mm256_mul_pd(_mm256_fmadd_pd(a, tv, s0), exp_pd(_mm256_mul_pd(tv, neg_inv_tau)));
}

}  // namespace

double decay_sse(std::span<const double> t, std::span<const double> s, std::span<const double> w,
                 double a, double tau, double s0) {
  const double inv_tau = 1.0 / tau;
  const __m256d av = _mm256_set1_pd(a);
  const __m256d nit = _mm256_set1_pd(-inv_tau);
  const __m256d s0v = _mm256_set1_pd(s0);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n = t.size();
  std::size_t i = 0;
  if (w.empty()) {
    for (; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(&s[i]), model4(&t[i], av, nit, s0v));
      acc = _mm256_fmadd_pd(r, r, acc);
    }
  } else {
    for (; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(&s[i]), model4(&t[i], av, nit, s0v));
      acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(&w[i]), r), r, acc);
    }
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double r = s[i] - (a * t[i] + s0) * std::exp(-t[i] * inv_tau);
    sum += (w.empty() ? 1.0 : w[i]) * r * r;
  }
  return sum;
}

void decay_eval(std::span<const double> t, double a, double tau, double s0, std::span<double> out) {
  const double inv_tau = 1.0 / tau;
  const __m256d av = _mm256_set1_pd(a);
  const __m256d nit = _mm256_set1_pd(-inv_tau);
  const __m256d s0v = _mm256_set1_pd(s0);
  const std::size_t n = t.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(&out[i], model4(&t[i], av, nit, s0v));
  for (; i < n; ++i) out[i] = (a * t[i] + s0) * std::exp(-t[i] * inv_tau);
}

double dot(std::span<const double> x, std::span<const double> y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

}  // namespace langfade::kernels::avx2
