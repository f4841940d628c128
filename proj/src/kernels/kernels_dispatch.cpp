#include <cstdlib>
#include <stdexcept>
#include <string>

#include "langfade/kernels.hpp"

namespace langfade::kernels {
namespace {

struct Table {
  Isa isa;
  double (*decay_sse)(std::span<const double>, std::span<const double>, std::span<const double>,
                      double, double, double);
  void (*decay_eval)(std::span<const double>, double, double, double, std::span<double>);
  double (*dot)(std::span<const double>, std::span<const double>);
};

Table make_table(Isa isa) {
#if defined(LANGFADE_HAVE_AVX2)
  if (isa == Isa::kAvx2) return {Isa::kAvx2, &avx2::decay_sse, &avx2::decay_eval, &avx2::dot};
#endif
  return {Isa::kScalar, &scalar::decay_sse, &scalar::decay_eval, &scalar::dot};
}

Table initial_table() {
  Isa isa = avx2_supported() ? Isa::kAvx2 : Isa::kScalar;
  if (const char* env = std::getenv("LANGFADE_ISA")) {
    const std::string want(env);
    if (want == "scalar") {
      isa = Isa::kScalar;
    } else if (want == "avx2" && !avx2_supported()) {
      throw std::runtime_error("LANGFADE_ISA=avx2 requested but the CPU lacks AVX2/FMA");
    }
  }
  return make_table(isa);
}

Table& table() {
  static Table t = initial_table();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(LANGFADE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

void set_active_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !avx2_supported()) {
    throw std::invalid_argument("AVX2 kernels are not available on this CPU");
  }
  table() = make_table(isa);
}

double decay_sse(std::span<const double> t, std::span<const double> s, std::span<const double> w,
                 double a, double tau, double s0) {
  return table().decay_sse(t, s, w, a, tau, s0);
}

void decay_eval(std::span<const double> t, double a, double tau, double s0, std::span<double> out) {
  table().decay_eval(t, a, tau, s0, out);
}

double dot(std::span<const double> x, std::span<const double> y) { return table().dot(x, y); }

}  // namespace langfade::kernels
