#include <cmath>

#include "langfade/kernels.hpp"

namespace langfade::kernels::scalar {

double decay_sse(std::span<const double> t, std::span<const double> s, std::span<const double> w,
                 double a, double tau, double s0) {
  const double inv_tau = 1.0 / tau;
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = s[i] - (a * t[i] + s0) * std::exp(-t[i] * inv_tau);
    sum += (w.empty() ? 1.0 : w[i]) * r * r;
  }
  return sum;
}

void decay_eval(std::span<const double> t, double a, double tau, double s0, std::span<double> out) {
  const double inv_tau = 1.0 / tau;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = (a * t[i] + s0) * std::exp(-t[i] * inv_tau);
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

}  // namespace langfade::kernels::scalar
