// Acceptance suite: one PASS/FAIL line per criterion, each within its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "bdlab/criterion.hpp"
#include "bdlab/dirichlet.hpp"
#include "bdlab/hardy.hpp"
#include "bdlab/kernels.hpp"
#include "bdlab/pdcp.hpp"
#include "oracles.hpp"

using namespace bdlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

unsigned worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome coefficient_formula() {
  const auto h = oracle::harmonic_table(10'000);
  double worst = 0.0;
  for (std::int64_t k = 2; k <= 50; ++k) {
    const TruncatedSeries c = hk_coeffs(k, 10'001);
    for (std::int64_t n = 0; n <= 10'000; ++n) {
      worst = std::max(worst, std::abs(c.seq.at(static_cast<std::size_t>(n)) - oracle::hk_coeff(h, k, n)));
    }
  }
  return {worst <= 1e-12, "max |recurrence - formula| = " + fmt(worst)};
}

Outcome isometries() {
  Outcome o;
  double worst_t = 0.0, worst_psi = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const IdentityReport t = verify_identity(Identity::TIsometry, {2, 3, 2, seed}, 1 << 10);
    const IdentityReport p = verify_identity(Identity::PsiIsometry, {2, 3, 2, seed}, 1 << 10);
    worst_t = std::max(worst_t, t.sup_discrepancy);
    worst_psi = std::max(worst_psi, p.sup_discrepancy);
    o.pass = o.pass && t.pass && p.pass;
  }
  double worst_ratio = 0.0;
  for (std::int64_t k = 2; k <= 12; ++k) {
    const IdentityReport r = verify_identity(Identity::PhiMapsRkToHk, {2, 3, k, 0}, 1 << 16);
    o.pass = o.pass && r.pass;
    worst_ratio = std::max(worst_ratio, r.weighted_discrepancy / r.threshold);
  }
  o.detail = "T rel " + fmt(worst_t) + ", Psi rel " + fmt(worst_psi) + ", Phi error/certificate <= " + fmt(worst_ratio);
  return o;
}

Outcome identities() {
  Outcome o;
  double worst = 0.0;
  int cells = 0;
  const std::size_t n = 1 << 14;
  for (std::int64_t m : {2, 3, 4, 6})
    for (std::int64_t d : {2, 3, 4, 6})
      for (std::int64_t k : {2, 3, 4, 6}) {
        for (Identity id : {Identity::SemigroupW, Identity::SemigroupT, Identity::Quasiconjugacy, Identity::WnOnHk}) {
          const IdentityReport r = verify_identity(id, {m, d, k, static_cast<std::uint64_t>(cells)}, n);
          o.pass = o.pass && r.pass;
          worst = std::max(worst, r.sup_discrepancy);
          ++cells;
        }
      }
  o.detail = std::to_string(cells) + " checks, max discrepancy " + fmt(worst);
  return o;
}

Outcome moebius_convergence() {
  Outcome o;
  const NTTables t = sieve(10'000);
  const DivisorSquareTail tail;
  double prev = 1e300;
  for (std::int64_t n : {10, 100, 1000, 10'000}) {
    const MoebiusResidualReport r = moebius_residual(n, 1 << 20, &t, &tail);
    o.pass = o.pass && r.residual_norm < prev && r.within_bound;
    prev = r.residual_norm;
    o.detail += "n=" + std::to_string(n) + ": " + fmt(r.residual_norm) + " <= " + fmt(r.bound) + "; ";
  }
  return o;
}

Outcome certificate_dominance() {
  Outcome o;
  const std::size_t N = 1 << 16;
  for (std::int64_t n : {10, 100}) {
    const DistanceReport d = distance(build_gram(Family::ImsHk, n, N, Target::OneMinusZ, worker_count()));
    const MoebiusResidualReport m = moebius_residual(n, N);
    o.pass = o.pass && d.distance <= m.residual_norm + 1e-9;
    o.detail += "n=" + std::to_string(n) + ": " + fmt(d.distance) + " <= " + fmt(m.residual_norm) + "; ";
  }
  return o;
}

Outcome compact_open() {
  Outcome o;
  const std::vector<std::complex<double>> pts{0.0, 0.5, {0.0, 0.5}};
  const NTTables t = sieve(1000);
  const CompactOpenReport a = compact_open_check(pts, 100, 1 << 20, &t);
  const CompactOpenReport b = compact_open_check(pts, 1000, 1 << 20, &t);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    o.pass = o.pass && a.points[i].within_bound && b.points[i].within_bound &&
             b.points[i].deviation < a.points[i].deviation;
    o.detail += fmt(a.points[i].deviation) + " -> " + fmt(b.points[i].deviation) + "; ";
  }
  return o;
}

Outcome dirichlet_crosscheck() {
  Outcome o;
  double worst = 0.0;
  for (std::int64_t k = 2; k <= 10; ++k) {
    const EnergyCrosscheck x = dirichlet_energy_bergman_crosscheck(k, 1 << 16);
    worst = std::max(worst, x.relative_difference);
  }
  const GoldenPairReport g = golden_pair_check(10'000);
  o.pass = worst <= 1e-6 && g.pass;
  o.detail = "energy vs Bergman rel " + fmt(worst) + ", golden pair deviation " + fmt(g.max_deviation);
  return o;
}

Outcome hkc_dichotomy() {
  Outcome o;
  const std::vector<std::size_t> lengths{1 << 14, 1 << 15, 1 << 16};
  double worst_step = 0.0, least_growth = 1e300;
  for (std::int64_t k : {2, 3, 5, 10, 50}) {
    const auto same = hkc_partial_norms(k, static_cast<double>(k), lengths);
    worst_step = std::max({worst_step, std::abs(same[1] - same[0]), std::abs(same[2] - same[1])});
    const auto off = hkc_partial_norms(k, 2.0 * static_cast<double>(k), lengths);
    const double growth = (off[2] - off[0]) / (0.5 * std::numbers::ln2 * (256.0 - 128.0) * 0.9);
    least_growth = std::min(least_growth, growth);
  }
  o.pass = worst_step < 1e-2 && least_growth > 1.0;
  o.detail = "c=k max step " + fmt(worst_step) + ", c=2k growth / threshold " + fmt(least_growth);
  return o;
}

Outcome rh_proxy_monotone() {
  Outcome o;
  double prev = 1e300;
  for (std::int64_t K = 2; K <= 256; K *= 2) {
    const DistanceReport d = distance(build_gram(Family::Hk, K, 1 << 16, Target::One, worker_count()));
    o.pass = o.pass && d.distance <= prev + 1e-9 && d.distance > 0.0 && d.ridge > 0.0 &&
             std::isfinite(d.condition_estimate) && d.condition_estimate >= 1.0;
    prev = d.distance;
    if (K == 2 || K == 256) {
      o.detail += "K=" + std::to_string(K) + ": " + fmt(d.distance) + " (ridge " + fmt(d.ridge) + ", cond " +
                  fmt(d.condition_estimate) + "); ";
    }
  }
  return o;
}

Outcome pdcp_suite() {
  Outcome o;
  std::mt19937_64 rng(10);
  bool exact = true;
  for (int trial = 0; trial < 20; ++trial) {
    auto a = oracle::random_vector(rng, 256);
    a[0] = 0.0;
    const CoeffSeq f(a, Space::H2);
    exact = exact && map_U(f).norm() == norm(f);
    for (std::int64_t n : {2, 3, 7}) {
      exact = exact && map_U(apply_operator(OperatorTag::tn(n), f).out.seq).coeffs == dilate(n, map_U(f)).coeffs;
    }
  }
  const std::size_t n = 4096;
  const SineSeq uL = map_U(named_function(NamedFunction::L_log1mz, n).seq);
  double worst = 0.0;
  for (std::int64_t k = 2; k <= 32; ++k) {
    const SineSeq v = map_V(hk_coeffs(k, n).seq);
    const SineSeq tk = dilate(k, uL);
    for (std::size_t m = 1; m < n; ++m) worst = std::max(worst, std::abs(v.coeffs[m - 1] - (tk.coeffs[m - 1] - uL.coeffs[m - 1])));
  }
  const SineSeq f1 = wintner_fs(1.0, 1'000'000);
  const double basel = std::abs(f1.norm() * f1.norm() - std::numbers::pi * std::numbers::pi / 6.0);
  const RangeExclusionReport w = range_exclusion_witness();
  o.pass = exact && worst < 1e-12 && basel <= 1e-6 && w.log_diverges && w.ims_decays && w.poly_decays;
  o.detail = std::string(exact ? "U/intertwining exact" : "U/intertwining NOT exact") + ", V(h_k) max err " +
             fmt(worst) + ", Basel gap " + fmt(basel) + ", witness " +
             (w.log_diverges && w.ims_decays && w.poly_decays ? "ok" : "failed");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "coefficient formula", 5, coefficient_formula},
      {2, "isometries and Phi", 10, isometries},
      {3, "semigroup identities", 5, identities},
      {4, "Moebius convergence", 120, moebius_convergence},
      {5, "certificate dominance", 60, certificate_dominance},
      {6, "compact-open", 60, compact_open},
      {7, "Dirichlet cross-check", 30, dirichlet_crosscheck},
      {8, "h_{k,c} dichotomy", 10, hkc_dichotomy},
      {9, "distance monotone in K", 120, rh_proxy_monotone},
      {10, "PDCP suite", 60, pdcp_suite},
  };
  std::printf("kernels: %s\n", std::string(kernels::active().isa).c_str());
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs <= c.budget;
    failures += !pass;
    std::printf("criterion %2d %-24s %s  %.2fs/%.0fs  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs, c.budget,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
