#include <numbers>
#include <random>
#include <sstream>

#include "bdlab/error.hpp"
#include "bdlab/hardy.hpp"
#include "bdlab/pdcp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdlab;

TEST_CASE("U relabels and is unitary") {
  const SineSeq e1 = map_U(CoeffSeq({0.0, 1.0}, Space::H2));
  REQUIRE(e1.coeffs.size() == 1);
  CHECK(e1.coeffs[0] == 1.0);
  CHECK(evaluate_sine(e1, 0.5) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  CHECK_THROWS_AS(map_U(CoeffSeq({1.0, 1.0}, Space::H2)), InvalidInput);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = oracle::random_vector(rng, 100);
    a[0] = 0.0;
    const CoeffSeq f(a, Space::H2);
    CHECK(map_U(f).norm() == norm(f));
    for (std::int64_t n : {2, 3, 5}) {
      const CoeffSeq tf = apply_operator(OperatorTag::tn(n), f).out.seq;
      const SineSeq lhs = map_U(tf);
      const SineSeq rhs = dilate(n, map_U(f));
      CHECK(lhs.coeffs == rhs.coeffs);
    }
  }
  const SineSeq uL = map_U(named_function(NamedFunction::L_log1mz, 100).seq);
  for (std::size_t k = 1; k < 100; ++k) CHECK(-uL.coeffs[k - 1] == doctest::Approx(1.0 / static_cast<double>(k)));
}

TEST_CASE("V = U P (I - S)") {
  const SineSeq v1 = map_V(CoeffSeq({1.0}, Space::H2));
  REQUIRE(v1.coeffs.size() == 1);
  CHECK(v1.coeffs[0] == -1.0);

  std::mt19937_64 rng(32);
  const CoeffSeq f(oracle::random_vector(rng, 50), Space::H2);
  const auto ims = oracle::poly_mul({1.0, -1.0}, std::vector<double>(f.coeffs().begin(), f.coeffs().end()));
  double tail2 = 0.0;
  for (std::size_t i = 1; i < ims.size(); ++i) tail2 += ims[i] * ims[i];
  CHECK(map_V(f).norm() == doctest::Approx(std::sqrt(tail2)).epsilon(1e-14));

  // V(h_k) coefficient m is 1/m - k [k|m] / m, which is U(T_k L - L).
  const std::size_t n = 4096;
  const SineSeq uL = map_U(named_function(NamedFunction::L_log1mz, n).seq);
  for (std::int64_t k = 2; k <= 32; ++k) {
    const SineSeq v = map_V(hk_coeffs(k, n).seq);
    const SineSeq tk = dilate(k, uL);
    for (std::size_t m = 1; m < n; ++m) {
      const double closed = 1.0 / static_cast<double>(m) - (m % k == 0 ? static_cast<double>(k) / m : 0.0);
      CHECK(std::abs(v.coeffs[m - 1] - closed) < 1e-12);
      CHECK(std::abs(v.coeffs[m - 1] - (tk.coeffs[m - 1] - uL.coeffs[m - 1])) < 1e-12);
    }
  }

  // injective on 1, z, ..., z^8
  Eigen::MatrixXd images(9, 9);
  for (std::size_t p = 0; p < 9; ++p) {
    const SineSeq v = map_V(CoeffSeq::monomial(p, Space::H2).padded(9));
    for (std::size_t i = 0; i < 9; ++i) images(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) = v.coeffs[i];
  }
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(images).rank() == 9);
}

TEST_CASE("dilation") {
  SineSeq e1{{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.0};
  const SineSeq e2 = dilate(2, e1);
  CHECK(e2.coeffs[1] == 1.0);
  CHECK(e2.coeffs[0] == 0.0);
  std::mt19937_64 rng(33);
  const SineSeq s{oracle::random_vector(rng, 120), 0.0};
  CHECK(dilate(1, s).coeffs == s.coeffs);
  CHECK(dilate(2, dilate(3, s)).coeffs == dilate(6, s).coeffs);
  CHECK_THROWS_AS(dilate(0, s), InvalidInput);
}

TEST_CASE("Wintner functions") {
  const SineSeq f1 = wintner_fs(1.0, 4);
  CHECK(f1.coeffs[2] == doctest::Approx(1.0 / 3.0));
  const SineSeq big = wintner_fs(1.0, 1'000'000);
  CHECK(std::abs(big.norm() * big.norm() - std::numbers::pi * std::numbers::pi / 6.0) <= 1e-6);
  CHECK(big.tail_bound == doctest::Approx(1e-3));
  CHECK_THROWS_AS(wintner_fs(0.4, 10), InvalidInput);
  CHECK_THROWS_AS(wintner_fs(0.5, 10), InvalidInput);
}

TEST_CASE("span distances of dilates") {
  SineSeq e1{{1.0}, 0.0};
  CHECK(span_distance_L2(e1, e1, 4).distance < 1e-12);

  const SineSeq f1 = wintner_fs(1.0, 4096);
  SineSeq target{std::vector<double>(4096, 0.0), 0.0};
  target.coeffs[0] = 1.0;
  const double d8 = span_distance_L2(target, f1, 8).distance;
  const double d64 = span_distance_L2(target, f1, 64).distance;
  CHECK(d64 <= d8 + 1e-9);

  // The same problem on the H2 side through U gives the same numbers.
  const std::size_t n = 2048;
  const SineSeq gen = map_V(hk_coeffs(2, n).seq);
  std::vector<std::vector<double>> basis;
  std::vector<double> tails;
  for (std::int64_t m = 1; m <= 6; ++m) {
    std::vector<double> p(n + 1, 0.0);
    for (std::size_t i = 0; i < gen.coeffs.size(); ++i) p[i + 1] = gen.coeffs[i];
    const CoeffSeq tm = apply_operator(OperatorTag::tn(m), CoeffSeq(p, Space::H2)).out.seq;
    basis.emplace_back(tm.coeffs().begin(), tm.coeffs().end());
    tails.push_back(0.0);
  }
  std::vector<double> t(n + 1, 0.0);
  t[1] = 1.0;
  const double h2_side = span_distance(basis, tails, t, 0.0).distance;
  SineSeq sine_target{std::vector<double>(n, 0.0), 0.0};
  sine_target.coeffs[0] = 1.0;
  CHECK(span_distance_L2(sine_target, gen, 6).distance == doctest::Approx(h2_side).epsilon(1e-12));
  CHECK_THROWS_AS(span_distance_L2(e1, SineSeq{{0.0}, 0.0}, 3), InvalidInput);
}

TEST_CASE("range exclusion witness") {
  const RangeExclusionReport r = range_exclusion_witness();
  CHECK(r.radii.size() == 11);
  CHECK(r.log_diverges);
  CHECK(r.ims_decays);
  CHECK(r.poly_decays);
  for (double step : r.log_steps) CHECK(step == doctest::Approx(-std::log(2.0)).epsilon(1e-9));
  CHECK(std::abs(r.ims_means.back()) < 1e-4);
}

TEST_CASE("sampling") {
  const SineSeq s = wintner_fs(2.0, 64);
  CHECK(std::abs(evaluate_sine(s, 1.0)) < 1e-13);
  for (double x : {0.1, 0.37, 0.8}) CHECK(evaluate_sine(s, x) + evaluate_sine(s, 2.0 - x) == doctest::Approx(0.0).scale(1.0));
  const auto samples = sample_odd_periodic(s, 8);
  CHECK(samples.size() == 8);
  CHECK(samples[0].first == doctest::Approx(0.125));
  // Parseval on (0,1) with 2^16 midpoints
  const auto grid = sample_odd_periodic(s, 1 << 17);
  double q = 0.0;
  for (std::size_t i = 0; i < grid.size() / 2; ++i) q += grid[i].second * grid[i].second;
  q /= static_cast<double>(grid.size() / 2);
  CHECK(q == doctest::Approx(s.norm() * s.norm()).epsilon(1e-4));
  std::ostringstream out;
  write_samples_csv(samples, out);
  CHECK(out.str().rfind("x,value\n", 0) == 0);
  CHECK_THROWS_AS(sample_odd_periodic(s, 1), InvalidInput);
}
