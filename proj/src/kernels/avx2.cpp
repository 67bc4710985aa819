#include <immintrin.h>

#include "bdlab/kernels.hpp"
#include "lanes.hpp"

namespace bdlab::kernels::avx2 {
namespace {

struct Vec2Sum {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d v) {
    const __m256d t = _mm256_add_pd(s, v);
    const __m256d z = _mm256_sub_pd(t, s);
    const __m256d e = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, z)), _mm256_sub_pd(v, z));
    s = t;
    c = _mm256_add_pd(c, e);
  }

  void add_product(__m256d a, __m256d b) {
    const __m256d h = _mm256_mul_pd(a, b);
    const __m256d r = _mm256_fmsub_pd(a, b, h);
    const __m256d t = _mm256_add_pd(s, h);
    const __m256d z = _mm256_sub_pd(t, s);
    const __m256d e = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, z)), _mm256_sub_pd(h, z));
    s = t;
    c = _mm256_add_pd(c, _mm256_add_pd(e, r));
  }

  void fold(double& total, double& comp) const {
    alignas(32) double sl[kLanes], cl[kLanes];
    _mm256_store_pd(sl, s);
    _mm256_store_pd(cl, c);
    fold_lanes(sl, cl, total, comp);
  }
};

}  // namespace

double sum2(const double* x, std::size_t n) {
  Vec2Sum acc;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc.add(_mm256_loadu_pd(x + i));
  double total = 0.0, comp = 0.0;
  acc.fold(total, comp);
  for (; i < n; ++i) {
    double e;
    two_sum(total, x[i], total, e);
    comp += e;
  }
  return total + comp;
}

double dot2(const double* x, const double* y, std::size_t n) {
  Vec2Sum acc;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc.add_product(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
  double total = 0.0, comp = 0.0;
  acc.fold(total, comp);
  for (; i < n; ++i) accumulate_product(x[i], y[i], total, comp);
  return total + comp;
}

double bergman_dot2(const double* x, const double* y, std::size_t n, std::size_t offset) {
  Vec2Sum acc;
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d step = _mm256_set1_pd(static_cast<double>(kLanes));
  const double base = static_cast<double>(offset);
  __m256d p = _mm256_setr_pd(base, base + 1.0, base + 2.0, base + 3.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d w = _mm256_div_pd(one, _mm256_mul_pd(_mm256_add_pd(p, one), _mm256_add_pd(p, two)));
    acc.add_product(_mm256_mul_pd(_mm256_loadu_pd(x + i), w), _mm256_loadu_pd(y + i));
    p = _mm256_add_pd(p, step);
  }
  double total = 0.0, comp = 0.0;
  acc.fold(total, comp);
  for (; i < n; ++i) {
    const double w = bergman_weight(static_cast<double>(i + offset));
    accumulate_product(x[i] * w, y[i], total, comp);
  }
  return total + comp;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace bdlab::kernels::avx2
