#include "bdlab/pdcp.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "bdlab/error.hpp"
#include "bdlab/hardy.hpp"
#include "bdlab/kernels.hpp"
#include "bdlab/series_io.hpp"

namespace bdlab {

double SineSeq::norm() const { return std::sqrt(std::max(0.0, kernels::dot2(coeffs, coeffs))); }

SineSeq map_U(const TruncatedSeries& f) {
  if (f.seq.space() != Space::H2) throw InvalidInput("U expects an H2 series");
  if (f.seq.at(0) != 0.0) throw InvalidInput("U is defined on functions vanishing at 0");
  const auto c = f.seq.coeffs();
  return {std::vector<double>(c.begin() + 1, c.end()), f.tail_bound};
}

SineSeq map_V(const TruncatedSeries& f) {
  if (f.seq.space() != Space::H2) throw InvalidInput("V expects an H2 series");
  const auto c = f.seq.coeffs();
  std::vector<double> out(c.size());
  for (std::size_t j = 1; j <= c.size(); ++j) out[j - 1] = (j < c.size() ? c[j] : 0.0) - c[j - 1];
  return {std::move(out), 2.0 * f.tail_bound};
}

SineSeq dilate(std::int64_t n, const SineSeq& s) {
  if (n < 1) throw InvalidInput("dilation parameter must be >= 1");
  const std::size_t len = s.coeffs.size();
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> out(len, 0.0);
  double dropped = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t m = (i + 1) * nn;
    if (m <= len) {
      out[m - 1] = s.coeffs[i];
    } else {
      dropped += s.coeffs[i] * s.coeffs[i];
    }
  }
  return {std::move(out), std::sqrt(dropped) + s.tail_bound};
}

SineSeq wintner_fs(double s, std::size_t ns) {
  if (!(s > 0.5)) throw InvalidInput("f_s is square summable only for s > 1/2");
  if (ns < 1) throw InvalidInput("need at least one coefficient");
  std::vector<double> c(ns);
  for (std::size_t k = 1; k <= ns; ++k) c[k - 1] = std::pow(static_cast<double>(k), -s);
  const double tail2 = std::pow(static_cast<double>(ns), 1.0 - 2.0 * s) / (2.0 * s - 1.0);
  return {std::move(c), std::sqrt(tail2)};
}

DistanceReport span_distance_L2(const SineSeq& target, const SineSeq& generator, std::int64_t n_max,
                                unsigned threads) {
  if (n_max < 1) throw InvalidInput("n_max must be >= 1");
  if (generator.norm() == 0.0) throw InvalidInput("generator must be nonzero");
  const std::size_t len = std::max(target.coeffs.size(), generator.coeffs.size());
  SineSeq g = generator;
  g.coeffs.resize(len, 0.0);
  std::vector<double> t = target.coeffs;
  t.resize(len, 0.0);
  std::vector<std::vector<double>> basis;
  std::vector<double> tails;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    SineSeq d = dilate(n, g);
    basis.push_back(std::move(d.coeffs));
    tails.push_back(d.tail_bound);
  }
  DistanceReport rep = span_distance(basis, tails, t, target.tail_bound, threads);
  rep.K = n_max;
  return rep;
}

RangeExclusionReport range_exclusion_witness(std::size_t N, std::uint64_t seed) {
  if (N < 1024) throw InvalidInput("N must be >= 1024");
  RangeExclusionReport rep;
  rep.N = N;
  const CoeffSeq L = named_function(NamedFunction::L_log1mz, N).seq;
  const CoeffSeq ims = ims_hk_coeffs(2, N).seq;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> p(17);
  double p_l1 = 0.0;
  for (double& c : p) {
    c = u(rng);
    p_l1 += std::abs(c);
  }
  std::vector<double> q(p.size() + 1, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    q[j] += p[j];
    q[j + 1] -= p[j];
  }
  const CoeffSeq poly(std::move(q), Space::H2);

  rep.log_diverges = rep.ims_decays = rep.poly_decays = true;
  for (int j = 4; j <= 14; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    rep.radii.push_back(r);
    rep.log_means.push_back(evaluate(L, r).real());
    rep.ims_means.push_back(evaluate(ims, r).real());
    rep.poly_means.push_back(evaluate(poly, r).real());
    const double gap = 1.0 - r;
    if (std::abs(rep.ims_means.back()) > gap) rep.ims_decays = false;
    if (rep.ims_means.size() > 1 &&
        std::abs(rep.ims_means.back()) >= std::abs(rep.ims_means[rep.ims_means.size() - 2])) {
      rep.ims_decays = false;
    }
    if (std::abs(rep.poly_means.back()) > gap * p_l1) rep.poly_decays = false;
    if (rep.log_means.size() > 1) {
      rep.log_steps.push_back(rep.log_means.back() - rep.log_means[rep.log_means.size() - 2]);
      // |sum_{j>=N} r^j / j| <= r^N / (N (1 - r)) at both radii.
      const auto dropped = [&](double rr) {
        return std::pow(rr, static_cast<double>(N)) / (static_cast<double>(N) * (1.0 - rr));
      };
      const double slack = 1e-9 + dropped(r) + dropped(rep.radii[rep.radii.size() - 2]);
      if (std::abs(rep.log_steps.back() + std::numbers::ln2) > slack) rep.log_diverges = false;
    }
  }
  return rep;
}

double evaluate_sine(const SineSeq& s, double x) {
  const double theta = std::numbers::pi * x;
  const double two_cos = 2.0 * std::cos(theta);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = s.coeffs.size(); i-- > 0;) {
    const double b0 = s.coeffs[i] + two_cos * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return std::numbers::sqrt2 * b1 * std::sin(theta);
}

std::vector<std::pair<double, double>> sample_odd_periodic(const SineSeq& s, std::size_t grid) {
  if (grid < 2) throw InvalidInput("grid must be >= 2");
  std::vector<std::pair<double, double>> out;
  out.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    out.emplace_back(x, evaluate_sine(s, x));
  }
  return out;
}

void write_samples_csv(const std::vector<std::pair<double, double>>& samples, std::ostream& out) {
  out << "x,value\n";
  for (const auto& [x, v] : samples) out << format_double(x) << ',' << format_double(v) << '\n';
}

nlohmann::json to_json(const RangeExclusionReport& r) {
  return {{"N", r.N},
          {"radii", r.radii},
          {"log_means", r.log_means},
          {"log_steps", r.log_steps},
          {"ims_means", r.ims_means},
          {"poly_means", r.poly_means},
          {"log_diverges", r.log_diverges},
          {"ims_decays", r.ims_decays},
          {"poly_decays", r.poly_decays}};
}

}  // namespace bdlab
