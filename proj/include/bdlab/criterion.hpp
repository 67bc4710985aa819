#pragma once

// Least-squares distances to spans of h_k or (I - S)h_k, the explicit Moebius
// combination converging to 1 - z, and pointwise checks inside the disk.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdlab/hardy.hpp"
#include "bdlab/numtheory.hpp"
#include "bdlab/series.hpp"
#include "json.hpp"

namespace bdlab {

enum class Family { Hk, ImsHk };
enum class Target { One, OneMinusZ };
enum class SolverKind { Cholesky, PivotedLDLT };

std::string to_string(Family f);
std::string to_string(Target t);
std::string to_string(SolverKind s);
Family family_from_string(const std::string& name);
Target target_from_string(const std::string& name);

/// Dense storage above this many bytes is refused.
inline constexpr std::size_t kMaxGramBytes = std::size_t{2} << 30;

struct GramSolution {
  Eigen::VectorXd x;
  double ridge = 0.0;
  double condition_estimate = 1.0;
  /// Smallest eigenvalue of the unregularized matrix (or a lower estimate).
  double min_eigenvalue = 0.0;
  SolverKind solver = SolverKind::Cholesky;
};

/// Solves (G + eps I) x = b. eps starts at 1e-14 trace(G) / dim and grows by
/// 10 until a Cholesky factorization succeeds; after eight failures a pivoted
/// LDLT is used. One step of iterative refinement against G + eps I follows.
/// Throws NumericalFailure when no factorization succeeds.
GramSolution solve_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs);

/// Gram matrix of arbitrary equally-weighted coefficient vectors, filled in
/// parallel. Each entry is one compensated dot product, so the result does
/// not depend on the thread count.
Eigen::MatrixXd assemble_gram(const std::vector<std::vector<double>>& vectors, unsigned threads = 1);

struct GramSystem {
  Family family = Family::Hk;
  Target target = Target::One;
  std::int64_t K = 2;
  std::size_t N = 0;
  std::vector<std::vector<double>> basis;  ///< f_2 .. f_K truncated to N
  std::vector<double> tail_bounds;         ///< H2 tail bound of each f_k
  std::vector<double> target_coeffs;
  Eigen::MatrixXd gram;
  Eigen::VectorXd target_ip;
  double target_norm2 = 0.0;
};

/// 2 <= K <= 1e4 and N >= 2K, otherwise InvalidInput.
GramSystem build_gram(Family family, std::int64_t K, std::size_t N, Target target, unsigned threads = 1);

struct DistanceReport {
  std::int64_t K = 0;
  std::size_t N = 0;
  /// Norm of target - sum x_k f_k, computed directly from the coefficients.
  double distance = 0.0;
  /// target_norm2 - x^T b; can go slightly negative and is then clamped.
  double gram_distance2 = 0.0;
  bool clamped = false;
  double residual_max_abs = 0.0;
  double residual_head_norm = 0.0;  ///< norm of the first 64 residual coefficients
  SolverKind solver = SolverKind::Cholesky;
  double ridge = 0.0;
  double condition_estimate = 1.0;
  double min_eigenvalue = 0.0;
  /// sum |x_k| tau_k: how far the truncated minimizer can be from its value
  /// as an element of H2.
  double truncation_bound = 0.0;
  double wall_time = 0.0;
};

DistanceReport distance(const GramSystem& system);

/// Distance computation for arbitrary vectors in a plain l2 coefficient space.
DistanceReport span_distance(const std::vector<std::vector<double>>& basis, const std::vector<double>& tail_bounds,
                             const std::vector<double>& target, double target_tail_bound, unsigned threads = 1);

struct MoebiusResidualReport {
  std::int64_t n = 0;
  std::size_t N = 0;
  double residual_norm = 0.0;
  double phi_bound = 0.0;  ///< certified upper bound on sum_{j>n} d(j)^2 / j^2
  double M1 = 0.0;         ///< sum_{k<=n} mu(k)/k
  double M2 = 0.0;         ///< sum_{k<=n} mu(k) log(k)/k
  double log_norm = 0.0;   ///< ||log(1 - z)|| over the first N coefficients
  double bound = 0.0;      ///< sqrt(phi_bound) + |M1| log_norm + |1 + M2|
  bool within_bound = false;
};

/// Residual coefficients of sum_{k=2}^n (mu(k)/k)(I - S)h_k - (1 - z), built
/// per coefficient from the divisor-restricted Moebius sums.
std::vector<double> moebius_residual_coeffs(const NTTables& tables, std::int64_t n, std::size_t N);

/// Uses `tables` when they reach n, otherwise sieves. `tail` defaults to a
/// DivisorSquareTail with the default cutoff.
MoebiusResidualReport moebius_residual(std::int64_t n, std::size_t N, const NTTables* tables = nullptr,
                                       const DivisorSquareTail* tail = nullptr);

struct PointCheck {
  std::complex<double> z;
  std::complex<double> value;   ///< sum_{k=2}^n (mu(k)/k) h_k(z)
  double deviation = 0.0;       ///< |value - 1|
  double truncation_slack = 0.0;
  double bound = 0.0;           ///< ||r_n|| / (|1 - z| sqrt(1 - |z|^2)) + slack
  bool within_bound = false;
};

struct CompactOpenReport {
  std::int64_t n = 0;
  std::size_t N = 0;
  double residual_norm = 0.0;
  std::vector<PointCheck> points;
};

CompactOpenReport compact_open_check(const std::vector<std::complex<double>>& points, std::int64_t n, std::size_t N,
                                     const NTTables* tables = nullptr);

enum class CyclicityFamily { WnOnOne, TnOnOneMinusZ };

struct CyclicityReport {
  CyclicityFamily family;
  std::int64_t n_max = 0;
  std::int64_t rank = 0;
  std::int64_t kernel_dimension = 0;
  double max_deviation = 0.0;  ///< from the expected exact structure
  bool pass = false;
};

CyclicityReport cyclicity_witness(CyclicityFamily family, std::int64_t n_max, std::size_t N);

std::string distance_csv_header();
std::string to_csv_row(const DistanceReport& r);
nlohmann::json to_json(const DistanceReport& r);
std::string moebius_csv_header();
std::string to_csv_row(const MoebiusResidualReport& r);
nlohmann::json to_json(const MoebiusResidualReport& r);
nlohmann::json to_json(const CompactOpenReport& r);

}  // namespace bdlab
