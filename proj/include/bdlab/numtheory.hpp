#pragma once

// Sieved arithmetic functions: Moebius, divisor count (the number of
// divisors, not their sum), harmonic numbers and the two Moebius partial sums
// whose limits are equivalent forms of the prime number theorem:
//
//   sum_{k>=1} mu(k)/k = 0,     sum_{k>=1} mu(k) log(k)/k = -1.
//
// Convergence of both is slow and no rate is assumed anywhere.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

namespace bdlab {

inline constexpr double kEulerGamma = std::numbers::egamma_v<double>;
inline constexpr std::int64_t kMaxSieveLimit = 100'000'000;

/// All arrays are indexed by n = 0..limit; entry 0 is 0 except where noted.
struct NTTables {
  std::int64_t limit = 0;
  std::vector<std::int8_t> mobius;
  std::vector<std::uint32_t> divisor_count;
  std::vector<double> harmonic;             ///< H(n) = sum_{j<=n} 1/j, H(0) = 0
  std::vector<double> mertens_over_k;       ///< sum_{k<=n} mu(k)/k
  std::vector<double> mertens_logk_over_k;  ///< sum_{k<=n} mu(k) log(k)/k

  /// H(floor(x)) for real x >= 0.
  double harmonic_at(double x) const;
};

/// Linear sieve up to `limit` (1 <= limit <= 1e8). With threads > 1 a
/// segmented trial-division sieve fills the integer tables in parallel; the
/// result is bit-identical to the single-threaded one.
NTTables sieve(std::int64_t limit, unsigned threads = 1);

struct MertensSums {
  double over_k = 0.0;
  double logk_over_k = 0.0;
};

/// Partial sums at n = tables.limit.
MertensSums mertens_limits_check(const NTTables& tables);

/// [k | n]; 0 counts as a multiple of everything.
int divides_indicator(std::int64_t k, std::int64_t n);

/// H(n) - log(n) - gamma, whose magnitude is at most 1/n.
double harmonic_asymptotic_residual(std::int64_t n);

/// S(j) = sum_{d | j, 2 <= d <= n} mu(d) for 0 <= j < length (S(0) = 0),
/// built by walking multiples of each squarefree d.
std::vector<std::int32_t> restricted_mobius_divisor_sums(const NTTables& tables, std::int64_t n,
                                                         std::size_t length);

/// Divisor counts 0..limit only (entry 0 is 0).
std::vector<std::uint32_t> divisor_counts(std::int64_t limit);

inline constexpr std::int64_t kDefaultDivisorTailCutoff = std::int64_t{1} << 24;

/// sum_{j > n} d(j)^2 / j^2, summed exactly up to a cutoff J and completed
/// with the rigorous remainder bound
///
///   sum_{j > J} d(j)^2/j^2 <= 2 (u^3 + 3u^2 + 6u + 6) / J,   u = 1 + log J,
///
/// which follows from d(j)^2 <= d_4(j) and sum_{j<=x} d_4(j) <= x (1 + log x)^3.
class DivisorSquareTail {
 public:
  explicit DivisorSquareTail(std::int64_t cutoff = kDefaultDivisorTailCutoff);

  std::int64_t cutoff() const { return cutoff_; }
  /// sum_{n < j <= min(upto, J)} d(j)^2 / j^2
  double partial(std::int64_t n, std::int64_t upto) const;
  double partial(std::int64_t n) const { return partial(n, cutoff_); }
  double remainder_bound() const;
  /// Certified upper bound on the infinite tail past n.
  double upper(std::int64_t n) const { return partial(n) + remainder_bound(); }

 private:
  std::int64_t cutoff_;
  std::vector<std::uint32_t> d_;
};

// Binary cache layout (all integers and doubles little-endian):
//   char[8]   magic "BDLABNT1"
//   uint64    limit M
//   int8      mobius[M + 1]
//   uint32    divisor_count[M + 1]
//   float64   harmonic[M + 1]
//   float64   mertens_over_k[M + 1]
//   float64   mertens_logk_over_k[M + 1]
void write_cache(const NTTables& tables, const std::filesystem::path& path);
NTTables read_cache(const std::filesystem::path& path);

inline constexpr std::int64_t kMaxCsvLimit = 1'000'000;

/// Header `n,mobius,divisor_count,harmonic,mertens_over_k,mertens_logk_over_k`,
/// rows n = 1..M. Refuses M above kMaxCsvLimit.
void write_csv(const NTTables& tables, std::ostream& out);

/// Reads `<cache_dir>/nttables_<limit>.bin` when present, otherwise sieves and
/// writes it. An empty cache_dir disables caching.
NTTables load_or_sieve(std::int64_t limit, const std::filesystem::path& cache_dir, unsigned threads = 1);

}  // namespace bdlab
