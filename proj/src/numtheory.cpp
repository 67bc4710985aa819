#include "bdlab/numtheory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>

#include "bdlab/error.hpp"

namespace bdlab {

namespace {

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct IntegerTables {
  std::vector<std::int8_t> mobius;
  std::vector<std::uint32_t> divisor_count;
};

IntegerTables linear_sieve(std::int64_t limit, bool want_mobius) {
  const auto m = static_cast<std::size_t>(limit);
  IntegerTables t;
  if (want_mobius) t.mobius.assign(m + 1, 0);
  t.divisor_count.assign(m + 1, 0);
  std::vector<std::uint8_t> exponent(m + 1, 0);  // exponent of the smallest prime factor
  std::vector<std::uint32_t> primes;
  if (want_mobius) t.mobius[1] = 1;
  t.divisor_count[1] = 1;
  for (std::size_t i = 2; i <= m; ++i) {
    if (t.divisor_count[i] == 0) {
      primes.push_back(static_cast<std::uint32_t>(i));
      if (want_mobius) t.mobius[i] = -1;
      t.divisor_count[i] = 2;
      exponent[i] = 1;
    }
    for (std::uint32_t p : primes) {
      const std::size_t q = static_cast<std::size_t>(p) * i;
      if (q > m) break;
      if (i % p == 0) {
        if (want_mobius) t.mobius[q] = 0;
        exponent[q] = static_cast<std::uint8_t>(exponent[i] + 1);
        t.divisor_count[q] = t.divisor_count[i] / (exponent[i] + 1u) * (exponent[i] + 2u);
        break;
      }
      if (want_mobius) t.mobius[q] = static_cast<std::int8_t>(-t.mobius[i]);
      exponent[q] = 1;
      t.divisor_count[q] = t.divisor_count[i] * 2u;
    }
  }
  return t;
}

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// Factors every n in [lo, hi) by the primes up to sqrt(limit).
void segment_factor(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& primes,
                    IntegerTables& t) {
  std::vector<std::uint64_t> rest(hi - lo);
  for (std::uint64_t n = lo; n < hi; ++n) {
    rest[n - lo] = n;
    t.mobius[n] = 1;
    t.divisor_count[n] = 1;
  }
  for (std::uint32_t p : primes) {
    const std::uint64_t first = (lo + p - 1) / p * p;
    for (std::uint64_t n = first; n < hi; n += p) {
      std::uint64_t& r = rest[n - lo];
      std::uint32_t a = 0;
      while (r % p == 0) {
        r /= p;
        ++a;
      }
      t.mobius[n] = a == 1 ? static_cast<std::int8_t>(-t.mobius[n]) : std::int8_t{0};
      t.divisor_count[n] *= a + 1;
    }
  }
  for (std::uint64_t n = lo; n < hi; ++n) {
    if (rest[n - lo] > 1) {
      t.mobius[n] = static_cast<std::int8_t>(-t.mobius[n]);
      t.divisor_count[n] *= 2;
    }
  }
}

IntegerTables segmented_sieve(std::int64_t limit, unsigned threads) {
  const auto m = static_cast<std::uint64_t>(limit);
  IntegerTables t;
  t.mobius.assign(m + 1, 0);
  t.divisor_count.assign(m + 1, 0);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m))) + 1;
  const auto primes = small_primes(root);
  constexpr std::uint64_t kSegment = std::uint64_t{1} << 16;
  const std::uint64_t segments = (m + kSegment) / kSegment;  // covers [0, m]
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t s = w; s < segments; s += threads) {
        const std::uint64_t lo = std::max<std::uint64_t>(1, s * kSegment);
        const std::uint64_t hi = std::min(m + 1, (s + 1) * kSegment);
        if (lo < hi) segment_factor(lo, hi, primes, t);
      }
    });
  }
  pool.clear();
  return t;
}

}  // namespace

double NTTables::harmonic_at(double x) const {
  if (x < 0.0) throw InvalidInput("harmonic sum needs x >= 0");
  const auto n = static_cast<std::int64_t>(std::floor(x));
  if (n > limit) throw InvalidInput("harmonic sum requested beyond the sieve limit");
  return harmonic[static_cast<std::size_t>(n)];
}

NTTables sieve(std::int64_t limit, unsigned threads) {
  if (limit < 1 || limit > kMaxSieveLimit) {
    throw InvalidInput("sieve limit must lie in [1, 1e8], got " + std::to_string(limit));
  }
  IntegerTables ints = threads > 1 ? segmented_sieve(limit, threads) : linear_sieve(limit, true);

  NTTables t;
  t.limit = limit;
  t.mobius = std::move(ints.mobius);
  t.divisor_count = std::move(ints.divisor_count);
  const auto m = static_cast<std::size_t>(limit);
  t.harmonic.assign(m + 1, 0.0);
  t.mertens_over_k.assign(m + 1, 0.0);
  t.mertens_logk_over_k.assign(m + 1, 0.0);
  Neumaier h, m1, m2;
  for (std::size_t n = 1; n <= m; ++n) {
    const double inv = 1.0 / static_cast<double>(n);
    h.add(inv);
    t.harmonic[n] = h.value();
    if (t.mobius[n] != 0) {
      const double term = t.mobius[n] * inv;
      m1.add(term);
      m2.add(term * std::log(static_cast<double>(n)));
    }
    t.mertens_over_k[n] = m1.value();
    t.mertens_logk_over_k[n] = m2.value();
  }
  return t;
}

MertensSums mertens_limits_check(const NTTables& tables) {
  const auto m = static_cast<std::size_t>(tables.limit);
  return {tables.mertens_over_k.at(m), tables.mertens_logk_over_k.at(m)};
}

int divides_indicator(std::int64_t k, std::int64_t n) {
  if (k < 1) throw InvalidInput("divisibility indicator needs k >= 1");
  if (n < 0) throw InvalidInput("divisibility indicator needs n >= 0");
  return n % k == 0 ? 1 : 0;
}

double harmonic_asymptotic_residual(std::int64_t n) {
  if (n < 1) throw InvalidInput("harmonic residual needs n >= 1");
  Neumaier h;
  // Smallest terms first.
  for (std::int64_t j = n; j >= 1; --j) h.add(1.0 / static_cast<double>(j));
  Neumaier r;
  r.add(h.sum);
  r.add(h.comp);
  r.add(-std::log(static_cast<double>(n)));
  r.add(-kEulerGamma);
  return r.value();
}

std::vector<std::int32_t> restricted_mobius_divisor_sums(const NTTables& tables, std::int64_t n,
                                                         std::size_t length) {
  if (n < 1) throw InvalidInput("divisor range bound n must be >= 1");
  std::vector<std::int32_t> s(length, 0);
  if (length < 3) return s;
  const std::int64_t top = std::min<std::int64_t>(n, static_cast<std::int64_t>(length) - 1);
  if (top > tables.limit) throw InvalidInput("Moebius table too short for the requested divisor range");
  for (std::int64_t d = 2; d <= top; ++d) {
    const int mu = tables.mobius[static_cast<std::size_t>(d)];
    if (mu == 0) continue;
    for (auto j = static_cast<std::size_t>(d); j < length; j += static_cast<std::size_t>(d)) s[j] += mu;
  }
  return s;
}

std::vector<std::uint32_t> divisor_counts(std::int64_t limit) {
  if (limit < 1) throw InvalidInput("divisor count limit must be >= 1");
  return linear_sieve(limit, false).divisor_count;
}

DivisorSquareTail::DivisorSquareTail(std::int64_t cutoff) : cutoff_(cutoff) {
  if (cutoff < 16) throw InvalidInput("divisor tail cutoff too small");
  d_ = divisor_counts(cutoff);
}

double DivisorSquareTail::partial(std::int64_t n, std::int64_t upto) const {
  if (n < 0) throw InvalidInput("divisor tail start must be >= 0");
  Neumaier acc;
  const std::int64_t last = std::min(upto, cutoff_);
  for (std::int64_t j = last; j > n; --j) {
    const double q = static_cast<double>(d_[static_cast<std::size_t>(j)]) / static_cast<double>(j);
    acc.add(q * q);
  }
  return acc.value();
}

double DivisorSquareTail::remainder_bound() const {
  const double j = static_cast<double>(cutoff_);
  const double u = 1.0 + std::log(j);
  return 2.0 * (((u + 3.0) * u + 6.0) * u + 6.0) / j;
}

namespace {

constexpr char kMagic[8] = {'B', 'D', 'L', 'A', 'B', 'N', 'T', '1'};

template <class T>
void write_le(std::ostream& out, const std::vector<T>& v) {
  if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  } else {
    for (const T& x : v) {
      char b[sizeof(T)];
      std::memcpy(b, &x, sizeof(T));
      std::reverse(b, b + sizeof(T));
      out.write(b, sizeof(T));
    }
  }
}

template <class T>
void read_le(std::istream& in, std::vector<T>& v, std::size_t n) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if constexpr (std::endian::native != std::endian::little && sizeof(T) > 1) {
    for (T& x : v) {
      char b[sizeof(T)];
      std::memcpy(b, &x, sizeof(T));
      std::reverse(b, b + sizeof(T));
      std::memcpy(&x, b, sizeof(T));
    }
  }
}

}  // namespace

void write_cache(const NTTables& tables, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  write_le(out, std::vector<std::uint64_t>{static_cast<std::uint64_t>(tables.limit)});
  write_le(out, tables.mobius);
  write_le(out, tables.divisor_count);
  write_le(out, tables.harmonic);
  write_le(out, tables.mertens_over_k);
  write_le(out, tables.mertens_logk_over_k);
  if (!out) throw IoError("failed writing " + path.string());
}

NTTables read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError(path.string() + " is not a number-theory table cache");
  }
  std::vector<std::uint64_t> header;
  read_le(in, header, 1);
  if (!in || header[0] < 1 || header[0] > static_cast<std::uint64_t>(kMaxSieveLimit)) {
    throw IoError("corrupt cache header in " + path.string());
  }
  NTTables t;
  t.limit = static_cast<std::int64_t>(header[0]);
  const auto n = static_cast<std::size_t>(t.limit) + 1;
  read_le(in, t.mobius, n);
  read_le(in, t.divisor_count, n);
  read_le(in, t.harmonic, n);
  read_le(in, t.mertens_over_k, n);
  read_le(in, t.mertens_logk_over_k, n);
  if (!in) throw IoError("truncated cache file " + path.string());
  return t;
}

void write_csv(const NTTables& tables, std::ostream& out) {
  if (tables.limit > kMaxCsvLimit) throw InvalidInput("CSV dumps are limited to M <= 1e6");
  out.precision(17);
  out << "n,mobius,divisor_count,harmonic,mertens_over_k,mertens_logk_over_k\n";
  for (std::size_t n = 1; n <= static_cast<std::size_t>(tables.limit); ++n) {
    out << n << ',' << int(tables.mobius[n]) << ',' << tables.divisor_count[n] << ','
        << tables.harmonic[n] << ',' << tables.mertens_over_k[n] << ','
        << tables.mertens_logk_over_k[n] << '\n';
  }
  if (!out) throw IoError("failed writing table CSV");
}

NTTables load_or_sieve(std::int64_t limit, const std::filesystem::path& cache_dir, unsigned threads) {
  if (cache_dir.empty()) return sieve(limit, threads);
  const auto path = cache_dir / ("nttables_" + std::to_string(limit) + ".bin");
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) return read_cache(path);
  NTTables t = sieve(limit, threads);
  std::filesystem::create_directories(cache_dir, ec);
  if (ec) throw IoError("cannot create cache directory " + cache_dir.string());
  write_cache(t, path);
  return t;
}

}  // namespace bdlab
