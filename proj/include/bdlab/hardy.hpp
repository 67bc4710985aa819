#pragma once

// The functions h_k and their relatives, and the operators acting on them.
//
//   h_k(z)      = log((1 + z + ... + z^{k-1}) / k) / (1 - z),  k >= 2
//   c_n(k)      = H(n) - H(n/k) - log k       (Maclaurin coefficients of h_k)
//   (I - S)h_k  = log(1 - z^k) - log(1 - z) - log k
//   W_n f(z)    = (1 + z + ... + z^{n-1}) f(z^n)
//   T_n f(z)    = f(z^n)
//   T g(z)      = ((1 - z) g(z))' / (1 - z)          H2 -> BergmanA, isometric
//   Psi         : x(n+1) -> coefficient n            L2Omega -> BergmanA
//   Phi         = T^{-1} o Psi                       L2Omega -> H2
//
// Every constructor that truncates an infinite series returns a tail bound,
// and every operator propagates one.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bdlab/series.hpp"
#include "json.hpp"

namespace bdlab {

/// Sup over n >= 1, 2 <= k <= 100, n <= 1e6 of n |c_n(k)| / k is 0.5665
/// (oracle scan in the tests); rounded up.
inline constexpr double kHkDecayConstant = 0.6;

/// Coefficients c_0(k)..c_{N-1}(k), built by the compensated recurrence
/// c_n = c_{n-1} + (1 - k [k|n]) / n from c_0 = -log k. The tail bound is
/// kHkDecayConstant * k / sqrt(N - 1).
TruncatedSeries hk_coeffs(std::int64_t k, std::size_t n);

/// Truncated H2 norms of h_{k,c} = h_k + log(k/c) / (1 - z) at each length in
/// `lengths`. Converges only when c == k.
std::vector<double> hkc_partial_norms(std::int64_t k, double c, std::span<const std::size_t> lengths);

/// (I - S)h_k in closed form: -log k, then 1/j - k [k|j] / j.
TruncatedSeries ims_hk_coeffs(std::int64_t k, std::size_t n);

/// r_k(n) = k {n/k} = n mod k for n = 1..N, as an L2Omega sequence.
TruncatedSeries rk_sequence(std::int64_t k, std::size_t n);

enum class NamedFunction {
  L_log1mz,   ///< log(1 - z)                              H2
  R_geom,     ///< 1 / (1 - z), exact constant tail        BergmanA
  R_k,        ///< Psi r_k                                 BergmanA
  s_k,        ///< log(1 + z + ... + z^{k-1})              H2
  One,        ///< 1                                       H2
  OneMinusZ,  ///< 1 - z                                   H2
};

NamedFunction named_function_from_string(const std::string& name);

/// `k` is used by R_k and s_k only. s_k is assembled as log k + (1 - z) h_k.
TruncatedSeries named_function(NamedFunction name, std::size_t n, std::int64_t k = 0);

enum class OperatorKind { Shift, IMinusShift, W, Tn, TMap, TInv, Psi, Phi };

struct OperatorTag {
  OperatorKind kind;
  std::int64_t n = 1;  ///< dilation parameter for W and Tn

  static OperatorTag shift() { return {OperatorKind::Shift}; }
  static OperatorTag i_minus_shift() { return {OperatorKind::IMinusShift}; }
  static OperatorTag w(std::int64_t n) { return {OperatorKind::W, n}; }
  static OperatorTag tn(std::int64_t n) { return {OperatorKind::Tn, n}; }
  static OperatorTag t_map() { return {OperatorKind::TMap}; }
  static OperatorTag t_inv() { return {OperatorKind::TInv}; }
  static OperatorTag psi() { return {OperatorKind::Psi}; }
  static OperatorTag phi() { return {OperatorKind::Phi}; }
};

std::string to_string(const OperatorTag& tag);

struct OperatorResult {
  TruncatedSeries out;
  /// Output positions below this index are determined by the stored input.
  std::size_t reliable_range = 0;
  /// Uncertainty of a constant offset on every stored coefficient (nonzero
  /// only for T^{-1} on truncated input, where a_0 is selected numerically).
  double offset_bound = 0.0;

  /// Bound on the norm of (true - computed) restricted to positions < m.
  double certificate(std::size_t m) const;
};

/// Applies an operator. Throws InvalidInput when the input space is wrong and
/// NumericalFailure when the T^{-1} selection rule does not stabilize.
///
/// T^{-1} leaves a_0 free. For exact input (tail_bound == 0) a_0 is the unique
/// value making the eventually-constant solution vanish. For truncated input
/// a_0 is chosen so that a Hann-weighted mean of the last 1% of the computed
/// coefficients vanishes; the distance to the exact-rule solution of the
/// stored data enters offset_bound.
OperatorResult apply_operator(const OperatorTag& tag, const TruncatedSeries& f);
inline OperatorResult apply_operator(const OperatorTag& tag, const CoeffSeq& f) {
  return apply_operator(tag, TruncatedSeries{f, 0.0});
}

/// Hann-weighted mean of the final 1% (at least 16 entries) of `v`. Shared
/// by T^{-1} and the local Dirichlet decomposition.
double tail_window_mean(std::span<const double> v);

enum class Identity { SemigroupW, SemigroupT, Quasiconjugacy, WnOnHk, PhiMapsRkToHk, TIsometry, PsiIsometry };

std::string to_string(Identity id);
Identity identity_from_string(const std::string& name);

struct IdentityParams {
  std::int64_t m = 2;
  std::int64_t n = 3;
  std::int64_t k = 2;
  std::uint64_t seed = 0;
};

struct IdentityReport {
  Identity identity;
  IdentityParams params;
  double sup_discrepancy = 0.0;
  double weighted_discrepancy = 0.0;
  std::size_t reliable_range = 0;
  double threshold = 0.0;
  bool pass = false;
};

inline constexpr double kIdentityTolerance = 1e-10;

/// Checks one identity on the range where truncation cannot contaminate it.
/// Failures are reported, never thrown. PhiMapsRkToHk passes when the
/// discrepancy is within the propagated truncation certificate; the isometry
/// checks compare norms relatively; all others use kIdentityTolerance.
IdentityReport verify_identity(Identity id, const IdentityParams& params, std::size_t n);

nlohmann::json to_json(const IdentityReport& r);

}  // namespace bdlab
