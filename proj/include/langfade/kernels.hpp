#pragma once

// Inner-loop kernels shared by the fitter and the statistics code.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
// variant. The public entry points dispatch once per process to the best
// variant the CPU supports; LANGFADE_ISA=scalar|avx2 in the environment
// overrides the choice. Variants agree to rounding (see tests/test_kernels.cpp)
// but are not bit-identical, so reproducibility holds per selected ISA.

#include <span>
#include <string_view>

namespace langfade::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool avx2_supported();
Isa active_isa();
/// Overrides runtime selection. Throws std::invalid_argument if unsupported.
void set_active_isa(Isa isa);

/// Sum over i of w_i (s_i - (a t_i + s0) exp(-t_i / tau))^2; w empty means w_i = 1.
double decay_sse(std::span<const double> t, std::span<const double> s, std::span<const double> w,
                 double a, double tau, double s0);

/// out_i = (a t_i + s0) exp(-t_i / tau)
void decay_eval(std::span<const double> t, double a, double tau, double s0, std::span<double> out);

double dot(std::span<const double> x, std::span<const double> y);

namespace scalar {
double decay_sse(std::span<const double> t, std::span<const double> s, std::span<const double> w,
                 double a, double tau, double s0);
void decay_eval(std::span<const double> t, double a, double tau, double s0, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace scalar

#if defined(LANGFADE_HAVE_AVX2)
namespace avx2 {
double decay_sse(std::span<const double> t, std::span<const double> s, std::span<const double> w,
                 double a, double tau, double s0);
void decay_eval(std::span<const double> t, double a, double tau, double s0, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace avx2
#endif

}  // namespace langfade::kernels
