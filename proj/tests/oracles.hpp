#pragma once

// Independent brute-force references. Nothing here calls into the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// H(n) summed smallest term first in long double.
inline long double harmonic(std::int64_t n) {
  long double s = 0.0L;
  for (std::int64_t j = n; j >= 1; --j) s += 1.0L / static_cast<long double>(j);
  return s;
}

/// Harmonic numbers H(0..n) as a long double prefix table.
inline std::vector<long double> harmonic_table(std::int64_t n) {
  std::vector<long double> h(static_cast<std::size_t>(n) + 1, 0.0L);
  for (std::int64_t j = 1; j <= n; ++j) h[j] = h[j - 1] + 1.0L / static_cast<long double>(j);
  return h;
}

/// c_n(k) = H(n) - H(floor(n/k)) - log k.
inline double hk_coeff(const std::vector<long double>& h, std::int64_t k, std::int64_t n) {
  return static_cast<double>(h[n] - h[n / k] - std::log(static_cast<long double>(k)));
}

/// h_k(z) = log((1 + z + ... + z^{k-1}) / k) / (1 - z), principal branch.
inline std::complex<double> hk_value(std::int64_t k, std::complex<double> z) {
  std::complex<double> geo = 0.0, p = 1.0;
  for (std::int64_t i = 0; i < k; ++i) {
    geo += p;
    p *= z;
  }
  return std::log(geo / static_cast<double>(k)) / (1.0 - z);
}

inline int mobius(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

inline std::int64_t divisor_count(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  }
  return c;
}

inline long double dot(const std::vector<double>& x, const std::vector<double>& y) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) s += static_cast<long double>(x[i]) * y[i];
  return s;
}

/// Polynomial product, used to evaluate W_n and T_n from their definitions.
inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// f(z^n) as a full polynomial.
inline std::vector<double> compose_power(const std::vector<double>& a, std::size_t n) {
  std::vector<double> c((a.size() - 1) * n + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i * n] = a[i];
  return c;
}

/// (1 + ... + z^{n-1}) f(z^n) as a full polynomial.
inline std::vector<double> w_full(const std::vector<double>& a, std::size_t n) {
  return poly_mul(std::vector<double>(n, 1.0), compose_power(a, n));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace oracle
