#pragma once

// Truncated Maclaurin series and the three coefficient Hilbert spaces.
//
//   H2        <f, g> = sum a_n b_n
//   BergmanA  <f, g> = sum a_n b_n / ((n + 1)(n + 2))          n >= 0
//   L2Omega   <x, y> = sum x(n) y(n) / (n (n + 1))              n >= 1
//
// An L2Omega sequence stores x(n) at position n - 1, so positions carry the
// same weights as BergmanA; the canonical map between the two spaces is a
// relabeling.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bdlab {

enum class Space { H2, BergmanA, L2Omega };

std::string_view to_string(Space s);
Space space_from_string(std::string_view name);

/// Weight attached to storage position `p` of a sequence in space `s`.
double space_weight(Space s, std::size_t p);

/// Weighted mass of all positions >= n: 0 for H2 (not summable), 1/(n+1) for
/// the other two spaces.
double tail_weight(Space s, std::size_t n);

inline constexpr std::size_t kDefaultTruncation = std::size_t{1} << 16;

/// Coefficients a_0..a_{N-1} of a real analytic function (or sequence) with
/// every coefficient at positions >= N equal to `tail`. Immutable.
class CoeffSeq {
 public:
  CoeffSeq(std::vector<double> coeffs, Space space, double tail = 0.0);

  static CoeffSeq zero(Space space, std::size_t n = 1);
  static CoeffSeq monomial(std::size_t power, Space space, double value = 1.0);

  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  Space space() const { return space_; }
  double tail() const { return tail_; }

  /// Coefficient at any position, falling back to the tail.
  double at(std::size_t p) const { return p < coeffs_.size() ? coeffs_[p] : tail_; }

  /// Same function, storage extended to at least `n` positions.
  CoeffSeq padded(std::size_t n) const;

  /// Same coefficients relabeled into another space. Rejects a nonzero tail
  /// when the destination is H2.
  CoeffSeq relabeled(Space space) const;

  bool is_zero() const;

 private:
  std::vector<double> coeffs_;
  Space space_;
  double tail_;
};

/// A CoeffSeq standing for an infinite series, together with a bound on the
/// weighted norm of everything the stored coefficients leave out. A bound of
/// zero means the representation is exact.
struct TruncatedSeries {
  CoeffSeq seq;
  double tail_bound = 0.0;

  bool exact() const { return tail_bound == 0.0; }
};

double inner_product(const CoeffSeq& f, const CoeffSeq& g);
double norm(const CoeffSeq& f);

struct Evaluation {
  std::complex<double> value;
  double error_bound = 0.0;
};

/// Horner evaluation inside the unit disk, with the constant tail summed in
/// closed form t z^N / (1 - z).
std::complex<double> evaluate(const CoeffSeq& f, std::complex<double> z);

/// As above; `error_bound` is tail_bound / sqrt(1 - |z|^2), the norm of the
/// H2 point evaluation functional times the truncation bound.
Evaluation evaluate(const TruncatedSeries& f, std::complex<double> z);

/// alpha * x + y, padded to the longer operand.
CoeffSeq axpy(double alpha, const CoeffSeq& x, const CoeffSeq& y);
CoeffSeq scale(double alpha, const CoeffSeq& x);

/// Multiplies by z^shift and pads the storage to at least `length` positions.
CoeffSeq shift_pad(const CoeffSeq& x, std::size_t shift, std::size_t length = 0);

/// Keeps the first n positions. The dropped coefficients (relative to the
/// tail constant) are folded into the tail bound.
TruncatedSeries truncate(const TruncatedSeries& f, std::size_t n);

}  // namespace bdlab
