#include "bdlab/kernels.hpp"

#include "lanes.hpp"

namespace bdlab::kernels::scalar {

double sum2(const double* x, std::size_t n) {
  double s[kLanes] = {}, c[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      double e;
      two_sum(s[l], x[i + l], s[l], e);
      c[l] += e;
    }
  }
  double total = 0.0, comp = 0.0;
  fold_lanes(s, c, total, comp);
  for (; i < n; ++i) {
    double e;
    two_sum(total, x[i], total, e);
    comp += e;
  }
  return total + comp;
}

double dot2(const double* x, const double* y, std::size_t n) {
  double s[kLanes] = {}, c[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) accumulate_product(x[i + l], y[i + l], s[l], c[l]);
  }
  double total = 0.0, comp = 0.0;
  fold_lanes(s, c, total, comp);
  for (; i < n; ++i) accumulate_product(x[i], y[i], total, comp);
  return total + comp;
}

double bergman_dot2(const double* x, const double* y, std::size_t n, std::size_t offset) {
  double s[kLanes] = {}, c[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double w = bergman_weight(static_cast<double>(i + l + offset));
      accumulate_product(x[i + l] * w, y[i + l], s[l], c[l]);
    }
  }
  double total = 0.0, comp = 0.0;
  fold_lanes(s, c, total, comp);
  for (; i < n; ++i) {
    const double w = bergman_weight(static_cast<double>(i + offset));
    accumulate_product(x[i] * w, y[i], total, comp);
  }
  return total + comp;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace bdlab::kernels::scalar
