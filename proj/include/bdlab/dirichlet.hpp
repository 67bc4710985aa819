#pragma once

// Local Dirichlet space at a boundary point zeta: f = a + (z - zeta) g with
// g in H2, energy ||g||^2 and a the boundary value of f at zeta.

#include <complex>
#include <cstdint>
#include <vector>

#include "bdlab/series.hpp"
#include "json.hpp"

namespace bdlab {

struct DirichletDecomposition {
  double zeta = 1.0;
  double a = 0.0;  ///< boundary value f*(zeta)
  CoeffSeq g = CoeffSeq::zero(Space::H2);
  double energy = 0.0;    ///< ||g||^2 over the stored coefficients
  double residual = 0.0;  ///< H2 norm of f - (a + (z - zeta) g) over stored and next position
  std::size_t n = 0;      ///< number of stored coefficients of f
  bool exact = false;
  /// Radial value f(r zeta) at r = 1 - 1/sqrt(N); a diagnostic only.
  double abel_estimate = 0.0;
};

/// Only zeta = 1 and zeta = -1 are accepted: other unimodular points make g
/// complex. Polynomial input (tail_bound == 0) is divided exactly. Otherwise
/// a is the Hann-weighted window mean of the last 1% of the partial sums
/// sum_{i<=j} f_i zeta^i.
DirichletDecomposition decompose(const TruncatedSeries& f, std::complex<double> zeta);
inline DirichletDecomposition decompose(const CoeffSeq& f, std::complex<double> zeta) {
  return decompose(TruncatedSeries{f, 0.0}, zeta);
}

nlohmann::json to_json(const DirichletDecomposition& d);

struct EnergyCrosscheck {
  std::int64_t k = 0;
  std::size_t N = 0;
  double energy = 0.0;          ///< D(s_k), extrapolated from decompositions at N and N/2
  double bergman_norm2 = 0.0;   ///< ||R_k||^2 in BergmanA, truncated sum plus exact tail
  double energy_truncated = 0.0;
  double bergman_truncated = 0.0;
  double relative_difference = 0.0;
};

/// k >= 1. The energy of the truncated decomposition misses a tail of order
/// 1/N, removed by one Richardson step 2E(N) - E(N/2); the Bergman side sums
/// the periodic tail of R_k in closed form through the digamma function.
EnergyCrosscheck dirichlet_energy_bergman_crosscheck(std::int64_t k, std::size_t N = kDefaultTruncation);

inline constexpr double kGoldenRatio = 1.6180339887498948482;

std::complex<double> golden_a(std::complex<double> z);
std::complex<double> golden_b(std::complex<double> z);

struct GoldenPairReport {
  std::size_t grid = 0;
  double max_deviation = 0.0;  ///< max over samples of | |a|^2 + |b|^2 - 1 |
  double a0 = 0.0;
  bool pass = false;
};

/// Samples exp(2 pi i m / grid), m = 0..grid-1; grid >= 8.
GoldenPairReport golden_pair_check(std::size_t grid);

struct OrthogonalityProbe {
  std::vector<double> inner_products;  ///< <f, h_k> for k = 2..K
  double projection_norm = 0.0;
  double f_norm = 0.0;
};

/// Uses max(f.size(), 2K) coefficients of each h_k.
OrthogonalityProbe orthogonality_probe(const CoeffSeq& f, std::int64_t K);

}  // namespace bdlab
