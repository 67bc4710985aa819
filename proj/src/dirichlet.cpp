#include "bdlab/dirichlet.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>

#include "bdlab/criterion.hpp"
#include "bdlab/error.hpp"
#include "bdlab/hardy.hpp"
#include "bdlab/kernels.hpp"

namespace bdlab {

namespace {

double real_zeta(std::complex<double> zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) throw InvalidInput("zeta must be unimodular");
  if (zeta.imag() != 0.0) {
    throw InvalidInput("only zeta = 1 and zeta = -1 are supported (real coefficients)");
  }
  return zeta.real() > 0.0 ? 1.0 : -1.0;
}

double energy_at(std::int64_t k, std::size_t n) {
  if (k == 1) return 0.0;
  return decompose(named_function(NamedFunction::s_k, n, k), 1.0).energy;
}

}  // namespace

DirichletDecomposition decompose(const TruncatedSeries& f, std::complex<double> zeta) {
  if (f.seq.space() != Space::H2) throw InvalidInput("decompose expects an H2 series");
  const double z = real_zeta(zeta);
  const auto c = f.seq.coeffs();
  const std::size_t n = c.size();

  // G_j = g_j zeta^{j+1} = a - F_j with F_j = sum_{i<=j} f_i zeta^i.
  std::vector<double> partial(n);
  double acc = 0.0, comp = 0.0, sign = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = c[j] * sign;
    const double s = acc + v;
    comp += std::abs(acc) >= std::abs(v) ? (acc - s) + v : (v - s) + acc;
    acc = s;
    partial[j] = acc + comp;
    sign *= z;
  }

  DirichletDecomposition d;
  d.zeta = z;
  d.n = n;
  d.exact = f.exact();
  d.a = d.exact ? partial.back() : tail_window_mean(partial);
  {
    const double r = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
    d.abel_estimate = evaluate(f.seq, std::complex<double>(r * z, 0.0)).real();
  }

  const std::size_t glen = d.exact ? std::max<std::size_t>(n - 1, 1) : n;
  std::vector<double> g(glen, 0.0);
  double zp = z;  // zeta^{j+1}
  for (std::size_t j = 0; j < glen; ++j) {
    g[j] = (d.a - partial[j]) * zp;  // zeta^{-(j+1)} = zeta^{j+1} for zeta = +-1
    zp *= z;
  }

  // Rebuild a + (z - zeta) g and compare through position max(n, glen + 1) - 1.
  const std::size_t rlen = std::max(n, glen + 1);
  std::vector<double> diff(rlen, 0.0);
  for (std::size_t j = 0; j < rlen; ++j) {
    const double gj = j < glen ? g[j] : 0.0;
    const double gjm1 = j >= 1 && j - 1 < glen ? g[j - 1] : 0.0;
    const double rebuilt = (j == 0 ? d.a : 0.0) + gjm1 - z * gj;
    diff[j] = rebuilt - (j < n ? c[j] : 0.0);
  }
  d.residual = std::sqrt(kernels::dot2(diff, diff));
  d.g = CoeffSeq(std::move(g), Space::H2);
  d.energy = kernels::dot2(d.g.coeffs(), d.g.coeffs());
  return d;
}

nlohmann::json to_json(const DirichletDecomposition& d) {
  return {{"zeta", d.zeta}, {"a", d.a}, {"energy", d.energy}, {"residual", d.residual}, {"N", d.n},
          {"exact", d.exact}, {"abel_estimate", d.abel_estimate}};
}

EnergyCrosscheck dirichlet_energy_bergman_crosscheck(std::int64_t k, std::size_t N) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (N < 32) throw InvalidInput("N must be >= 32");
  EnergyCrosscheck x;
  x.k = k;
  x.N = N;
  x.energy_truncated = energy_at(k, N);
  x.energy = 2.0 * x.energy_truncated - energy_at(k, N / 2);

  const CoeffSeq rk = named_function(NamedFunction::R_k, N, std::max<std::int64_t>(k, 1)).seq;
  x.bergman_truncated = kernels::weighted_dot2(rk.coeffs(), rk.coeffs(), kernels::WeightKind::Bergman);
  // Positions p >= N with (p + 1) mod k = r: sum 1/((p+1)(p+2)) over an
  // arithmetic progression is a digamma difference.
  double tail = 0.0;
  const auto kd = static_cast<double>(k);
  for (std::int64_t c = 0; c < k; ++c) {
    const auto p0 = static_cast<double>(N) + static_cast<double>(c);
    const auto r = static_cast<double>((static_cast<std::int64_t>(N) + c + 1) % k);
    if (r == 0.0) continue;
    tail += r * r * (boost::math::digamma((p0 + 2.0) / kd) - boost::math::digamma((p0 + 1.0) / kd)) / kd;
  }
  x.bergman_norm2 = x.bergman_truncated + tail;
  const double scale = std::max(std::abs(x.bergman_norm2), std::abs(x.energy));
  x.relative_difference = scale == 0.0 ? 0.0 : std::abs(x.energy - x.bergman_norm2) / scale;
  return x;
}

std::complex<double> golden_a(std::complex<double> z) {
  return kGoldenRatio * (1.0 - z) / ((kGoldenRatio + 1.0) - z);
}

std::complex<double> golden_b(std::complex<double> z) { return kGoldenRatio / ((kGoldenRatio + 1.0) - z); }

GoldenPairReport golden_pair_check(std::size_t grid) {
  if (grid < 8) throw InvalidInput("grid must be >= 8");
  GoldenPairReport rep;
  rep.grid = grid;
  for (std::size_t m = 0; m < grid; ++m) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(grid);
    const std::complex<double> z = std::polar(1.0, theta);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(std::norm(golden_a(z)) + std::norm(golden_b(z)) - 1.0));
  }
  rep.a0 = golden_a(0.0).real();
  rep.pass = rep.max_deviation <= 1e-12 && rep.a0 > 0.0;
  return rep;
}

OrthogonalityProbe orthogonality_probe(const CoeffSeq& f, std::int64_t K) {
  if (K < 2) throw InvalidInput("K must be >= 2");
  if (f.space() != Space::H2) throw InvalidInput("orthogonality probe expects an H2 series");
  const std::size_t n = std::max(f.size(), static_cast<std::size_t>(2 * K));
  const CoeffSeq fp = f.padded(n);
  std::vector<double> target(fp.coeffs().begin(), fp.coeffs().end());
  std::vector<std::vector<double>> basis;
  std::vector<double> tails;
  OrthogonalityProbe probe;
  for (std::int64_t k = 2; k <= K; ++k) {
    const TruncatedSeries h = hk_coeffs(k, n);
    basis.emplace_back(h.seq.coeffs().begin(), h.seq.coeffs().end());
    tails.push_back(h.tail_bound);
    probe.inner_products.push_back(kernels::dot2(target, basis.back()));
  }
  probe.f_norm = std::sqrt(kernels::dot2(target, target));
  const DistanceReport d = span_distance(basis, tails, target, 0.0);
  probe.projection_norm = std::sqrt(std::max(0.0, probe.f_norm * probe.f_norm - d.distance * d.distance));
  return probe;
}

}  // namespace bdlab
