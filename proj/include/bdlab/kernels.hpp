#pragma once

// Inner loops shared by every coefficient-space computation.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA implementation. Both walk the data in four interleaved lanes and
// combine the lanes in the same fixed order, so the two variants return
// bit-identical results; the dispatcher only changes speed.
//
// Sums and dot products are compensated (TwoSum / TwoProduct error-free
// transformations, the "Dot2" scheme): the result is as accurate as if it had
// been accumulated in twice the working precision and then rounded.

#include <cstddef>
#include <span>
#include <string_view>

namespace bdlab::kernels {

/// Coefficient weights applied inside weighted_dot2.
enum class WeightKind {
  Unit,     ///< w(p) = 1
  Bergman,  ///< w(p) = 1 / ((p + 1)(p + 2)), p = position + offset
};

struct KernelTable {
  std::string_view isa;
  double (*sum2)(const double* x, std::size_t n);
  double (*dot2)(const double* x, const double* y, std::size_t n);
  double (*bergman_dot2)(const double* x, const double* y, std::size_t n,
                         std::size_t offset);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

namespace scalar {
double sum2(const double* x, std::size_t n);
double dot2(const double* x, const double* y, std::size_t n);
double bergman_dot2(const double* x, const double* y, std::size_t n, std::size_t offset);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
double sum2(const double* x, std::size_t n);
double dot2(const double* x, const double* y, std::size_t n);
double bergman_dot2(const double* x, const double* y, std::size_t n, std::size_t offset);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2

const KernelTable& scalar_table();

/// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table selected at first use. Setting BDLAB_SIMD=scalar in the
/// environment forces the scalar reference.
const KernelTable& active();

// Convenience wrappers over active().

inline double sum2(std::span<const double> x) { return active().sum2(x.data(), x.size()); }

inline double dot2(std::span<const double> x, std::span<const double> y) {
  return active().dot2(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

double weighted_dot2(std::span<const double> x, std::span<const double> y, WeightKind w,
                     std::size_t offset = 0);

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace bdlab::kernels
