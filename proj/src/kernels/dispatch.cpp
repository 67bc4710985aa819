#include <cstdlib>
#include <string_view>

#include "bdlab/kernels.hpp"

namespace bdlab::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &scalar::sum2, &scalar::dot2, &scalar::bergman_dot2,
                                 &scalar::axpy};
  return table;
}

const KernelTable* avx2_table() {
#if defined(BDLAB_BUILD_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", &avx2::sum2, &avx2::dot2, &avx2::bergman_dot2,
                                 &avx2::axpy};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* forced = std::getenv("BDLAB_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

double weighted_dot2(std::span<const double> x, std::span<const double> y, WeightKind w,
                     std::size_t offset) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  if (w == WeightKind::Unit) return active().dot2(x.data(), y.data(), n);
  return active().bergman_dot2(x.data(), y.data(), n, offset);
}

}  // namespace bdlab::kernels
