#pragma once

// Lane bookkeeping shared by the scalar and AVX2 translation units. Everything
// here has internal linkage so each TU gets its own copy compiled with its own
// target flags.

#include <cmath>
#include <cstddef>

namespace bdlab::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}

inline double bergman_weight(double p) { return 1.0 / ((p + 1.0) * (p + 2.0)); }

// Folds per-lane (sum, compensation) pairs into one accumulator in lane order.
inline void fold_lanes(const double* s, const double* c, double& total, double& comp) {
  for (std::size_t l = 0; l < kLanes; ++l) {
    double e;
    two_sum(total, s[l], total, e);
    comp += e + c[l];
  }
}

inline void accumulate_product(double x, double y, double& total, double& comp) {
  const double h = x * y;
  const double r = std::fma(x, y, -h);
  double e;
  two_sum(total, h, total, e);
  comp += e + r;
}

}  // namespace
}  // namespace bdlab::kernels
