#include "bdlab/criterion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "bdlab/error.hpp"
#include "bdlab/kernels.hpp"
#include "bdlab/series_io.hpp"

namespace bdlab {

namespace {

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
}

double log_norm(std::size_t n) {
  std::vector<double> inv(n > 1 ? n - 1 : 0);
  for (std::size_t j = 1; j < n; ++j) inv[j - 1] = 1.0 / static_cast<double>(j);
  return std::sqrt(kernels::dot2(inv, inv));
}

const DivisorSquareTail& default_divisor_tail() {
  static const DivisorSquareTail tail;
  return tail;
}

NTTables tables_for(std::int64_t n, const NTTables* given) {
  if (given != nullptr && given->limit >= n) return *given;
  return sieve(std::max<std::int64_t>(n, 1));
}

}  // namespace

std::string to_string(Family f) { return f == Family::Hk ? "Hk" : "ImsHk"; }
std::string to_string(Target t) { return t == Target::One ? "One" : "OneMinusZ"; }
std::string to_string(SolverKind s) { return s == SolverKind::Cholesky ? "cholesky" : "ldlt"; }

Family family_from_string(const std::string& name) {
  if (name == "Hk") return Family::Hk;
  if (name == "ImsHk") return Family::ImsHk;
  throw InvalidInput("unknown family '" + name + "'");
}

Target target_from_string(const std::string& name) {
  if (name == "One") return Target::One;
  if (name == "OneMinusZ") return Target::OneMinusZ;
  throw InvalidInput("unknown target '" + name + "'");
}

GramSolution solve_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  const Eigen::Index m = gram.rows();
  GramSolution sol;
  if (m == 0) {
    sol.x = Eigen::VectorXd(0);
    return sol;
  }
  const double trace = gram.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) throw NumericalFailure("Gram matrix has non-positive trace");
  double eps = 1e-14 * trace / static_cast<double>(m);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m, m);

  Eigen::MatrixXd reg;
  bool solved = false;
  for (int attempt = 0; attempt < 8 && !solved; ++attempt, eps *= 10.0) {
    reg = gram + eps * identity;
    Eigen::LLT<Eigen::MatrixXd> llt(reg);
    if (llt.info() != Eigen::Success) continue;
    sol.x = llt.solve(rhs);
    sol.x += llt.solve(rhs - reg * sol.x);
    if (!sol.x.allFinite()) continue;
    sol.ridge = eps;
    sol.solver = SolverKind::Cholesky;
    solved = true;
    if (m > 2048) {
      const auto d = llt.matrixL().toDenseMatrix().diagonal();
      const double ratio = d.maxCoeff() / d.minCoeff();
      sol.condition_estimate = ratio * ratio;
      sol.min_eigenvalue = d.minCoeff() * d.minCoeff() - eps;
    }
  }
  if (!solved) {
    eps /= 10.0;
    reg = gram + eps * identity;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
    if (ldlt.info() == Eigen::Success) {
      sol.x = ldlt.solve(rhs);
      sol.x += ldlt.solve(rhs - reg * sol.x);
    }
    if (ldlt.info() != Eigen::Success || !sol.x.allFinite()) {
      throw NumericalFailure("Gram solve failed at the largest ridge " + format_double(eps));
    }
    sol.ridge = eps;
    sol.solver = SolverKind::PivotedLDLT;
  }
  if (m <= 2048) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    sol.min_eigenvalue = lo;
    sol.condition_estimate = std::max(1.0, (hi + sol.ridge) / std::max(lo + sol.ridge, 1e-300));
  }
  sol.condition_estimate = std::max(1.0, sol.condition_estimate);
  return sol;
}

Eigen::MatrixXd assemble_gram(const std::vector<std::vector<double>>& vectors, unsigned threads) {
  const std::size_t m = vectors.size();
  Eigen::MatrixXd g(m, m);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(m * (m + 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) cells.emplace_back(i, j);
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    const auto [i, j] = cells[c];
    const std::size_t len = std::min(vectors[i].size(), vectors[j].size());
    const double v = kernels::dot2(std::span(vectors[i].data(), len), std::span(vectors[j].data(), len));
    g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  });
  return g;
}

GramSystem build_gram(Family family, std::int64_t K, std::size_t N, Target target, unsigned threads) {
  if (K < 2 || K > 10'000) throw InvalidInput("K must lie in [2, 10000]");
  if (N < static_cast<std::size_t>(2 * K)) throw InvalidInput("N must be at least 2K");
  const auto m = static_cast<std::size_t>(K - 1);
  const double bytes = 8.0 * static_cast<double>(m) * (static_cast<double>(N) + static_cast<double>(m));
  if (bytes > static_cast<double>(kMaxGramBytes)) {
    throw NumericalFailure("Gram system for K = " + std::to_string(K) + ", N = " + std::to_string(N) +
                       " exceeds the memory limit");
  }
  GramSystem sys;
  sys.family = family;
  sys.target = target;
  sys.K = K;
  sys.N = N;
  sys.basis.resize(m);
  sys.tail_bounds.resize(m);
  parallel_for(m, threads, [&](std::size_t i) {
    const auto k = static_cast<std::int64_t>(i) + 2;
    TruncatedSeries f = family == Family::Hk ? hk_coeffs(k, N) : ims_hk_coeffs(k, N);
    sys.basis[i].assign(f.seq.coeffs().begin(), f.seq.coeffs().end());
    sys.tail_bounds[i] = f.tail_bound;
  });
  sys.target_coeffs.assign(N, 0.0);
  sys.target_coeffs[0] = 1.0;
  if (target == Target::OneMinusZ) sys.target_coeffs[1] = -1.0;
  sys.gram = assemble_gram(sys.basis, threads);
  sys.target_ip.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    sys.target_ip(static_cast<Eigen::Index>(i)) = kernels::dot2(sys.target_coeffs, sys.basis[i]);
  }
  sys.target_norm2 = kernels::dot2(sys.target_coeffs, sys.target_coeffs);
  return sys;
}

namespace {

DistanceReport solve_distance(const std::vector<std::vector<double>>& basis, const std::vector<double>& tail_bounds,
                              const std::vector<double>& target, double target_tail_bound, const Eigen::MatrixXd& gram,
                              const Eigen::VectorXd& target_ip, double target_norm2) {
  const auto start = std::chrono::steady_clock::now();
  DistanceReport rep;
  rep.K = static_cast<std::int64_t>(basis.size()) + 1;
  rep.N = target.size();
  const GramSolution sol = solve_gram(gram, target_ip);
  rep.solver = sol.solver;
  rep.ridge = sol.ridge;
  rep.condition_estimate = sol.condition_estimate;
  rep.min_eigenvalue = sol.min_eigenvalue;

  std::vector<double> residual(target);
  rep.truncation_bound = target_tail_bound;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double xi = sol.x(static_cast<Eigen::Index>(i));
    const std::size_t len = std::min(basis[i].size(), residual.size());
    kernels::axpy(-xi, std::span(basis[i].data(), len), std::span(residual.data(), len));
    rep.truncation_bound += std::abs(xi) * tail_bounds[i];
  }
  rep.distance = std::sqrt(std::max(0.0, kernels::dot2(residual, residual)));
  const std::size_t head = std::min<std::size_t>(64, residual.size());
  rep.residual_head_norm = std::sqrt(kernels::dot2(std::span(residual.data(), head), std::span(residual.data(), head)));
  for (double r : residual) rep.residual_max_abs = std::max(rep.residual_max_abs, std::abs(r));

  const double d2 = basis.empty() ? target_norm2 : target_norm2 - sol.x.dot(target_ip);
  rep.clamped = d2 < 0.0;
  rep.gram_distance2 = std::max(0.0, d2);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

DistanceReport distance(const GramSystem& system) {
  DistanceReport rep = solve_distance(system.basis, system.tail_bounds, system.target_coeffs, 0.0, system.gram,
                                      system.target_ip, system.target_norm2);
  rep.K = system.K;
  return rep;
}

DistanceReport span_distance(const std::vector<std::vector<double>>& basis, const std::vector<double>& tail_bounds,
                             const std::vector<double>& target, double target_tail_bound, unsigned threads) {
  if (basis.size() != tail_bounds.size()) throw InvalidInput("one tail bound per basis vector is required");
  if (target.empty()) throw InvalidInput("empty target");
  std::vector<std::vector<double>> padded(basis);
  for (auto& v : padded) v.resize(target.size(), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() > target.size()) {
      throw InvalidInput("basis vectors cannot be longer than the target");
    }
  }
  const Eigen::MatrixXd gram = assemble_gram(padded, threads);
  Eigen::VectorXd ip(static_cast<Eigen::Index>(padded.size()));
  for (std::size_t i = 0; i < padded.size(); ++i) ip(static_cast<Eigen::Index>(i)) = kernels::dot2(target, padded[i]);
  return solve_distance(padded, tail_bounds, target, target_tail_bound, gram, ip, kernels::dot2(target, target));
}

std::vector<double> moebius_residual_coeffs(const NTTables& tables, std::int64_t n, std::size_t N) {
  if (n < 1) throw InvalidInput("Moebius cutoff n must be >= 1");
  if (N < 2) throw InvalidInput("N must be >= 2");
  if (tables.limit < n) throw InvalidInput("Moebius table too short for n");
  const auto nn = static_cast<std::size_t>(n);
  const double m1 = tables.mertens_over_k[nn];
  const double m2 = tables.mertens_logk_over_k[nn];
  const std::vector<std::int32_t> restricted = restricted_mobius_divisor_sums(tables, n, N);
  std::vector<double> r(N);
  // The k = 1 terms of the two Moebius sums are 1 and 0.
  r[0] = -m2 - 1.0;
  for (std::size_t j = 1; j < N; ++j) {
    r[j] = ((m1 - 1.0) - static_cast<double>(restricted[j])) / static_cast<double>(j);
  }
  r[1] += 1.0;
  return r;
}

MoebiusResidualReport moebius_residual(std::int64_t n, std::size_t N, const NTTables* tables,
                                       const DivisorSquareTail* tail) {
  if (n < 1) throw InvalidInput("Moebius cutoff n must be >= 1");
  const NTTables t = tables_for(n, tables);
  const DivisorSquareTail& dt = tail != nullptr ? *tail : default_divisor_tail();
  MoebiusResidualReport rep;
  rep.n = n;
  rep.N = N;
  const std::vector<double> r = moebius_residual_coeffs(t, n, N);
  rep.residual_norm = std::sqrt(kernels::dot2(r, r));
  rep.M1 = t.mertens_over_k[static_cast<std::size_t>(n)];
  rep.M2 = t.mertens_logk_over_k[static_cast<std::size_t>(n)];
  rep.phi_bound = dt.upper(n);
  rep.log_norm = log_norm(N);
  rep.bound = std::sqrt(rep.phi_bound) + std::abs(rep.M1) * rep.log_norm + std::abs(1.0 + rep.M2);
  rep.within_bound = rep.residual_norm <= rep.bound * (1.0 + 1e-12) + 1e-12;
  return rep;
}

CompactOpenReport compact_open_check(const std::vector<std::complex<double>>& points, std::int64_t n, std::size_t N,
                                     const NTTables* tables) {
  for (const auto& z : points) {
    if (std::abs(z) >= 1.0) throw InvalidInput("evaluation point must lie in the open unit disk");
  }
  if (n < 1) throw InvalidInput("Moebius cutoff n must be >= 1");
  const NTTables t = tables_for(n, tables);
  const std::vector<double> r = moebius_residual_coeffs(t, n, N);
  CompactOpenReport rep;
  rep.n = n;
  rep.N = N;
  rep.residual_norm = std::sqrt(kernels::dot2(r, r));

  // Coefficients of sum (mu(k)/k) h_k are partial sums of those of
  // sum (mu(k)/k)(I - S)h_k = r + (1 - z).
  std::vector<double> d(N);
  double acc = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double cj = r[j];
    if (j == 0) cj += 1.0;
    if (j == 1) cj -= 1.0;
    const double s = acc + cj;
    comp += std::abs(acc) >= std::abs(cj) ? (acc - s) + cj : (cj - s) + acc;
    acc = s;
    d[j] = acc + comp;
  }
  std::int64_t squarefree = 0;
  for (std::int64_t k = 2; k <= n; ++k) squarefree += t.mobius[static_cast<std::size_t>(k)] != 0;
  const double nm1 = static_cast<double>(N - 1);
  // H2 norm of the dropped part of the combination, and of the residual beyond N.
  const double combo_tail = kHkDecayConstant * static_cast<double>(squarefree) / std::sqrt(nm1);
  const double residual_tail =
      std::abs(t.mertens_over_k[static_cast<std::size_t>(n)] - 1.0) / std::sqrt(nm1) +
      std::sqrt(default_divisor_tail().upper(static_cast<std::int64_t>(N) - 1));

  for (const auto& z : points) {
    PointCheck pc;
    pc.z = z;
    std::complex<double> v = 0.0;
    for (std::size_t j = N; j-- > 0;) v = v * z + d[j];
    pc.value = v;
    pc.deviation = std::abs(v - 1.0);
    const double rho = std::abs(z);
    const double eval_norm = 1.0 / std::sqrt(1.0 - rho * rho);
    pc.truncation_slack = combo_tail * std::pow(rho, nm1 + 1.0) * eval_norm;
    pc.bound = (rep.residual_norm + residual_tail) * eval_norm / std::abs(1.0 - z) + pc.truncation_slack;
    pc.within_bound = pc.deviation <= pc.bound;
    rep.points.push_back(pc);
  }
  return rep;
}

CyclicityReport cyclicity_witness(CyclicityFamily family, std::int64_t n_max, std::size_t N) {
  if (n_max < 1) throw InvalidInput("n_max must be >= 1");
  CyclicityReport rep{family, n_max};
  const auto nm = static_cast<std::size_t>(n_max);
  if (family == CyclicityFamily::WnOnOne) {
    const std::size_t len = std::max(N, nm);
    const CoeffSeq one = CoeffSeq::monomial(0, Space::H2).padded(len);
    // W_n 1 = 1 + ... + z^{n-1}; consecutive differences are the monomials.
    std::vector<std::vector<double>> rows;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const CoeffSeq w = apply_operator(OperatorTag::w(n), one).out.seq;
      rows.emplace_back(w.coeffs().begin(), w.coeffs().begin() + static_cast<std::ptrdiff_t>(nm));
    }
    Eigen::MatrixXd a(n_max, n_max);
    for (std::size_t i = 0; i < nm; ++i) {
      for (std::size_t j = 0; j < nm; ++j) {
        const double expected = j <= i ? 1.0 : 0.0;
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        rep.max_deviation = std::max(rep.max_deviation, std::abs(rows[i][j] - expected));
        const double diff = rows[i][j] - (i > 0 ? rows[i - 1][j] : 0.0);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(diff - (j == i ? 1.0 : 0.0)));
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    rep.rank = lu.rank();
    rep.kernel_dimension = n_max - rep.rank;
    rep.pass = rep.max_deviation == 0.0 && rep.rank == n_max;
    return rep;
  }
  // Orthogonality to 1 - z^n for n <= n_max, on coefficients 0..n_max.
  const std::size_t len = nm + 1;
  const CoeffSeq base(std::vector<double>{1.0, -1.0}, Space::H2);
  Eigen::MatrixXd a(n_max, static_cast<Eigen::Index>(len));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const CoeffSeq v = apply_operator(OperatorTag::tn(n), base.padded(len)).out.seq;
    for (std::size_t j = 0; j < len; ++j) a(n - 1, static_cast<Eigen::Index>(j)) = v.at(j);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  rep.rank = lu.rank();
  const Eigen::MatrixXd ker = lu.kernel();
  rep.kernel_dimension = ker.cols();
  if (rep.kernel_dimension == 1) {
    Eigen::VectorXd v = ker.col(0);
    v /= v(0);
    rep.max_deviation = (v - Eigen::VectorXd::Ones(static_cast<Eigen::Index>(len))).cwiseAbs().maxCoeff();
  } else {
    rep.max_deviation = std::numeric_limits<double>::infinity();
  }
  rep.pass = rep.kernel_dimension == 1 && rep.max_deviation < 1e-12;
  return rep;
}

std::string distance_csv_header() { return "K,N,distance,ridge,condition,truncation_bound"; }

std::string to_csv_row(const DistanceReport& r) {
  return std::to_string(r.K) + "," + std::to_string(r.N) + "," + format_double(r.distance) + "," +
         format_double(r.ridge) + "," + format_double(r.condition_estimate) + "," + format_double(r.truncation_bound);
}

nlohmann::json to_json(const DistanceReport& r) {
  return {{"K", r.K},
          {"N", r.N},
          {"distance", r.distance},
          {"gram_distance2", r.gram_distance2},
          {"clamped", r.clamped},
          {"residual_max_abs", r.residual_max_abs},
          {"residual_head_norm", r.residual_head_norm},
          {"solver", to_string(r.solver)},
          {"ridge", r.ridge},
          {"condition", r.condition_estimate},
          {"min_eigenvalue", r.min_eigenvalue},
          {"truncation_bound", r.truncation_bound},
          {"wall_time", r.wall_time}};
}

std::string moebius_csv_header() { return "n,N,residual_norm,phi_bound,M1,M2"; }

std::string to_csv_row(const MoebiusResidualReport& r) {
  return std::to_string(r.n) + "," + std::to_string(r.N) + "," + format_double(r.residual_norm) + "," +
         format_double(r.phi_bound) + "," + format_double(r.M1) + "," + format_double(r.M2);
}

nlohmann::json to_json(const MoebiusResidualReport& r) {
  return {{"n", r.n},
          {"N", r.N},
          {"residual_norm", r.residual_norm},
          {"phi_bound", r.phi_bound},
          {"M1", r.M1},
          {"M2", r.M2},
          {"log_norm", r.log_norm},
          {"bound", r.bound},
          {"within_bound", r.within_bound}};
}

nlohmann::json to_json(const CompactOpenReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"z", {p.z.real(), p.z.imag()}},
                   {"value", {p.value.real(), p.value.imag()}},
                   {"deviation", p.deviation},
                   {"bound", p.bound},
                   {"truncation_slack", p.truncation_slack},
                   {"within_bound", p.within_bound}});
  }
  return {{"n", r.n}, {"N", r.N}, {"residual_norm", r.residual_norm}, {"points", pts}};
}

}  // namespace bdlab
