#pragma once

// L2(0,1) in the orthonormal sine basis e_k(x) = sqrt(2) sin(pi k x), the
// unitary U : z^k -> e_k on functions vanishing at 0, V = U P (I - S), and
// dilations phi(x) -> phi(n x).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bdlab/criterion.hpp"
#include "bdlab/series.hpp"
#include "json.hpp"

namespace bdlab {

/// coeffs[i] is the coefficient of e_{i+1}.
struct SineSeq {
  std::vector<double> coeffs;
  double tail_bound = 0.0;  ///< l2 bound on the omitted coefficients

  double norm() const;
};

/// Rejects a nonzero constant coefficient.
SineSeq map_U(const TruncatedSeries& f);
inline SineSeq map_U(const CoeffSeq& f) { return map_U(TruncatedSeries{f, 0.0}); }

/// Applies I - S, drops the constant term and relabels. Keeps the index-N
/// coefficient of (I - S)f, so a length-N input gives N sine coefficients.
SineSeq map_V(const TruncatedSeries& f);
inline SineSeq map_V(const CoeffSeq& f) { return map_V(TruncatedSeries{f, 0.0}); }

/// Output coefficient at m is the input coefficient at m/n when n | m. The
/// length is preserved.
SineSeq dilate(std::int64_t n, const SineSeq& s);

/// Coefficients k^{-s}, k = 1..ns; tail bound from the integral of x^{-2s}.
SineSeq wintner_fs(double s, std::size_t ns);

/// Least-squares distance from target to span{dilate(n, generator) : n <= n_max},
/// on max(target, generator) coefficients. The solver and ridge policy are
/// those of the Gram distances.
DistanceReport span_distance_L2(const SineSeq& target, const SineSeq& generator, std::int64_t n_max,
                                unsigned threads = 1);

struct RangeExclusionReport {
  std::size_t N = 0;
  std::vector<double> radii;
  std::vector<double> log_means;   ///< L(r) = log(1 - r)
  std::vector<double> log_steps;   ///< consecutive differences of log_means
  std::vector<double> ims_means;   ///< ((I - S)h_2)(r)
  std::vector<double> poly_means;  ///< ((1 - z) p)(r) for a fixed random p
  bool log_diverges = false;       ///< every step within 1e-9 plus the truncation tail of -log 2
  bool ims_decays = false;         ///< strictly decreasing in size and below 1 - r
  bool poly_decays = false;        ///< below (1 - r) sum |p_j|
};

/// Radii 1 - 2^{-j}, j = 4..14, with N coefficients (default 2^20).
RangeExclusionReport range_exclusion_witness(std::size_t N = std::size_t{1} << 20, std::uint64_t seed = 0);

/// sum c_k sqrt(2) sin(pi k x) by Clenshaw recurrence.
double evaluate_sine(const SineSeq& s, double x);

/// Values at the midpoints of `grid` equal cells of (0, 2); grid >= 2.
std::vector<std::pair<double, double>> sample_odd_periodic(const SineSeq& s, std::size_t grid);

void write_samples_csv(const std::vector<std::pair<double, double>>& samples, std::ostream& out);

nlohmann::json to_json(const RangeExclusionReport& r);

}  // namespace bdlab
