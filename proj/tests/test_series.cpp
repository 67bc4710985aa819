#include <random>
#include <sstream>

#include "bdlab/error.hpp"
#include "bdlab/hardy.hpp"
#include "bdlab/series.hpp"
#include "bdlab/series_io.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdlab;

TEST_CASE("inner products on constants") {
  CHECK(inner_product(CoeffSeq({1.0}, Space::H2), CoeffSeq({1.0}, Space::H2)) == 1.0);
  CHECK(inner_product(CoeffSeq({1.0}, Space::BergmanA), CoeffSeq({1.0}, Space::BergmanA)) == 0.5);
  for (std::size_t n : {1u, 2u, 10u, 1000u}) {
    const CoeffSeq ones(std::vector<double>(n, 1.0), Space::L2Omega, 1.0);
    CHECK(inner_product(ones, ones) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("norms") {
  CHECK(norm(CoeffSeq({3.0, 4.0}, Space::H2)) == 5.0);
  CHECK(norm(CoeffSeq({1.0}, Space::BergmanA, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(CoeffSeq::zero(Space::H2, 5)) == 0.0);
  CHECK(CoeffSeq::zero(Space::BergmanA, 3).is_zero());
}

TEST_CASE("constructor rejects malformed sequences") {
  CHECK_THROWS_AS(CoeffSeq({}, Space::H2), InvalidInput);
  CHECK_THROWS_AS(CoeffSeq({1.0, NAN}, Space::H2), InvalidInput);
  CHECK_THROWS_AS(CoeffSeq({1.0}, Space::H2, 1.0), InvalidInput);
  CHECK_THROWS_AS(CoeffSeq({1.0}, Space::BergmanA, 1.0).relabeled(Space::H2), InvalidInput);
  CHECK_THROWS_AS(inner_product(CoeffSeq({1.0}, Space::H2), CoeffSeq({1.0}, Space::BergmanA)), InvalidInput);
}

TEST_CASE("tail closed form agrees with explicit summation") {
  // 10^6 explicit tail terms, remaining tail beyond them added in closed form.
  for (Space s : {Space::BergmanA, Space::L2Omega}) {
    const CoeffSeq short_form({2.0, -1.0, 0.5}, s, 0.75);
    const CoeffSeq long_form = short_form.padded(1'000'003);
    CHECK(inner_product(short_form, short_form) ==
          doctest::Approx(inner_product(long_form, long_form)).epsilon(1e-10));
    long double explicit_sum = 4.0L / 2 + 1.0L / 6 + 0.25L / 12;
    for (std::size_t p = 3; p < 1'000'003; ++p) explicit_sum += 0.5625L / ((p + 1.0L) * (p + 2.0L));
    explicit_sum += 0.5625L / 1'000'004.0L;
    CHECK(inner_product(short_form, short_form) == doctest::Approx(static_cast<double>(explicit_sum)).epsilon(1e-10));
  }
}

TEST_CASE("monomials are orthogonal in every space") {
  for (Space s : {Space::H2, Space::BergmanA, Space::L2Omega}) {
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        const double ip = inner_product(CoeffSeq::monomial(i, s), CoeffSeq::monomial(j, s));
        if (i != j) CHECK(ip == 0.0);
        else CHECK(ip == doctest::Approx(space_weight(s, i)));
      }
  }
}

TEST_CASE("Cauchy-Schwarz and the parallelogram law on random input") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    for (Space s : {Space::H2, Space::BergmanA, Space::L2Omega}) {
      const double tf = s == Space::H2 ? 0.0 : u(rng);
      const double tg = s == Space::H2 ? 0.0 : u(rng);
      const CoeffSeq f(oracle::random_vector(rng, 1 + trial * 7), s, tf);
      const CoeffSeq g(oracle::random_vector(rng, 1 + trial * 3), s, tg);
      CHECK(std::abs(inner_product(f, g)) <= norm(f) * norm(g) * (1 + 1e-14));
      const double lhs = std::pow(norm(axpy(1.0, f, g)), 2) + std::pow(norm(axpy(-1.0, f, g)), 2);
      const double rhs = 2.0 * (std::pow(norm(f), 2) + std::pow(norm(g), 2));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("evaluation") {
  CHECK(evaluate(CoeffSeq({1.0, 1.0, 1.0}, Space::H2), 0.0) == std::complex<double>(1.0));
  const CoeffSeq geo({1.0}, Space::BergmanA, 1.0);
  CHECK(std::abs(evaluate(geo, 0.5) - 2.0) < 1e-15);
  const TruncatedSeries L = named_function(NamedFunction::L_log1mz, kDefaultTruncation);
  const Evaluation e = evaluate(L, 0.5);
  CHECK(std::abs(e.value + std::log(2.0)) < 1e-9);
  CHECK(e.error_bound > 0.0);
  CHECK_THROWS_AS(evaluate(geo, 1.0), InvalidInput);
  CHECK_THROWS_AS(evaluate(geo, std::complex<double>(0.0, 1.5)), InvalidInput);
}

TEST_CASE("linear primitives") {
  const CoeffSeq r = axpy(2.0, CoeffSeq({1.0, 0.0}, Space::H2), CoeffSeq({0.0, 1.0}, Space::H2));
  CHECK(r.at(0) == 2.0);
  CHECK(r.at(1) == 1.0);
  CHECK(scale(0.0, CoeffSeq({1.0, 2.0}, Space::BergmanA, 3.0)).is_zero());
  const CoeffSeq t = axpy(1.0, CoeffSeq({0.0}, Space::BergmanA, 1.0), CoeffSeq({0.0}, Space::BergmanA, -1.0));
  CHECK(t.tail() == 0.0);
  const CoeffSeq s = shift_pad(CoeffSeq({1.0, 2.0}, Space::H2), 2, 6);
  CHECK(s.size() == 6);
  CHECK(s.at(0) == 0.0);
  CHECK(s.at(2) == 1.0);
  CHECK(s.at(3) == 2.0);
  CHECK(s.at(5) == 0.0);
}

TEST_CASE("truncation grows the tail bound by the dropped norm") {
  const TruncatedSeries f{CoeffSeq({1.0, 2.0, 3.0, 4.0}, Space::H2), 0.5};
  const TruncatedSeries g = truncate(f, 2);
  CHECK(g.seq.size() == 2);
  CHECK(g.tail_bound == doctest::Approx(0.5 + 5.0));
}

TEST_CASE("csv and json round trips are exact") {
  std::mt19937_64 rng(5);
  const CoeffSeq f(oracle::random_vector(rng, 257), Space::H2);
  std::stringstream ss;
  write_csv(f, ss);
  CHECK(ss.str().rfind("index,value\n", 0) == 0);
  const CoeffSeq back = read_csv(ss, Space::H2);
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.at(i) == f.at(i));

  const CoeffSeq a({0.25, -1.0}, Space::BergmanA, 1.0);
  const nlohmann::json j = to_json(a);
  CHECK(j["space"] == "BergmanA");
  CHECK(j["n"] == 2);
  CHECK(j["tail"] == 1.0);
  const CoeffSeq a2 = coeffseq_from_json(nlohmann::json::parse(j.dump()));
  CHECK(a2.tail() == 1.0);
  CHECK(a2.at(1) == -1.0);
  std::stringstream bad;
  CHECK_THROWS_AS(write_csv(a, bad), InvalidInput);
}
