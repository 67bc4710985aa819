#include "bdlab/hardy.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>

#include "bdlab/error.hpp"
#include "bdlab/kernels.hpp"

namespace bdlab {

namespace {

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// sqrt(sum_{j >= n} 1/j^2) bounded by 1/sqrt(n - 1); n = 1 uses pi/sqrt(6).
double inverse_square_tail_root(std::size_t n) {
  if (n <= 1) return std::numbers::pi / std::sqrt(6.0);
  return 1.0 / std::sqrt(static_cast<double>(n - 1));
}

// h_1 is identically zero; callers validating k >= 2 use hk_coeffs.
std::vector<double> hk_values(std::int64_t k, std::size_t n) {
  std::vector<double> c(n, 0.0);
  if (k == 1) return c;
  Neumaier acc;
  acc.add(-std::log(static_cast<double>(k)));
  c[0] = acc.value();
  const auto kk = static_cast<std::size_t>(k);
  const double drop = 1.0 - static_cast<double>(k);
  for (std::size_t j = 1; j < n; ++j) {
    const double jd = static_cast<double>(j);
    acc.add(j % kk == 0 ? drop / jd : 1.0 / jd);
    c[j] = acc.value();
  }
  return c;
}

void require_space(const TruncatedSeries& f, Space s, const char* op) {
  if (f.seq.space() != s) {
    throw InvalidInput(std::string(op) + " expects input in " + std::string(to_string(s)) + ", got " +
                       std::string(to_string(f.seq.space())));
  }
}

void require_positive_n(std::int64_t n) {
  if (n < 1) throw InvalidInput("dilation parameter must be >= 1");
}

double sum_squares(std::span<const double> v) { return std::max(0.0, kernels::dot2(v, v)); }

OperatorResult shift(const TruncatedSeries& f) {
  require_space(f, Space::H2, "S");
  const auto a = f.seq.coeffs();
  std::vector<double> b(a.size() + 1, 0.0);
  std::copy(a.begin(), a.end(), b.begin() + 1);
  return {{CoeffSeq(std::move(b), Space::H2), f.tail_bound}, a.size() + 1, 0.0};
}

OperatorResult i_minus_shift(const TruncatedSeries& f) {
  require_space(f, Space::H2, "I - S");
  const auto a = f.seq.coeffs();
  std::vector<double> b(a.size());
  b[0] = a[0];
  for (std::size_t j = 1; j < a.size(); ++j) b[j] = a[j] - a[j - 1];
  // The index-N coefficient -a_{N-1} is dropped; ||I - S|| = 2 on the input tail.
  const double bound = std::abs(a.back()) + 2.0 * f.tail_bound;
  return {{CoeffSeq(std::move(b), Space::H2), bound}, a.size(), 0.0};
}

OperatorResult w_op(std::int64_t n, const TruncatedSeries& f) {
  require_space(f, Space::H2, "W_n");
  require_positive_n(n);
  const auto a = f.seq.coeffs();
  const std::size_t len = a.size();
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> b(len);
  for (std::size_t m = 0; m < len; ++m) b[m] = a[m / nn];
  // Replicas of a_j that fall at positions >= N.
  Neumaier dropped;
  for (std::size_t j = len / nn; j < len; ++j) {
    const std::size_t start = std::max(len, j * nn);
    const std::size_t stop = j * nn + nn;
    if (stop > start) dropped.add(static_cast<double>(stop - start) * a[j] * a[j]);
  }
  const double bound = std::sqrt(std::max(0.0, dropped.value())) + std::sqrt(static_cast<double>(n)) * f.tail_bound;
  return {{CoeffSeq(std::move(b), Space::H2), bound}, len, 0.0};
}

OperatorResult tn_op(std::int64_t n, const TruncatedSeries& f) {
  require_space(f, Space::H2, "T_n");
  require_positive_n(n);
  const auto a = f.seq.coeffs();
  const std::size_t len = a.size();
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> b(len, 0.0);
  for (std::size_t j = 0; j * nn < len; ++j) b[j * nn] = a[j];
  const std::size_t first_dropped = (len + nn - 1) / nn;
  const double dropped = first_dropped < len ? sum_squares(a.subspan(first_dropped)) : 0.0;
  return {{CoeffSeq(std::move(b), Space::H2), std::sqrt(dropped) + f.tail_bound}, len, 0.0};
}

OperatorResult t_map(const TruncatedSeries& f) {
  require_space(f, Space::H2, "T");
  const auto a = f.seq.coeffs();
  const std::size_t len = a.size();
  std::vector<double> b(len);
  Neumaier acc;
  for (std::size_t j = 0; j < len; ++j) {
    const double next = j + 1 < len ? a[j + 1] : 0.0;
    acc.add(static_cast<double>(j + 1) * (next - a[j]));
    b[j] = acc.value();
  }
  const double tail = b.back();
  // T is an isometry H2 -> A, so the input tail bound carries over unchanged.
  return {{CoeffSeq(std::move(b), Space::BergmanA, tail), f.tail_bound}, len, 0.0};
}

std::size_t window_length(std::size_t n) { return std::min(n, std::max<std::size_t>(16, n / 100)); }

OperatorResult t_inv(const TruncatedSeries& f) {
  require_space(f, Space::BergmanA, "T^{-1}");
  const auto b = f.seq.coeffs();
  const std::size_t len = b.size();
  // partial[j] = a_j - a_0 for j = 0..N+1.
  std::vector<double> partial(len + 2, 0.0);
  Neumaier acc;
  double prev = 0.0;
  for (std::size_t j = 0; j <= len; ++j) {
    const double bj = j < len ? b[j] : f.seq.tail();
    acc.add((bj - prev) / static_cast<double>(j + 1));
    partial[j + 1] = acc.value();
    prev = bj;
  }
  const double exact_a0 = -partial[len + 1];

  if (f.exact()) {
    std::vector<double> a(len + 1);
    for (std::size_t j = 0; j <= len; ++j) a[j] = partial[j] + exact_a0;
    return {{CoeffSeq(std::move(a), Space::H2), 0.0}, len + 1, 0.0};
  }

  const std::span<const double> computed(partial.data(), len);
  const double last = tail_window_mean(computed);
  const std::size_t w = window_length(len);
  if (len >= 2 * w) {
    const auto previous_window = computed.subspan(len - 2 * w, w);
    const double before = tail_window_mean(previous_window.subspan(0));
    const auto both = computed.subspan(len - 2 * w);
    const auto [lo, hi] = std::minmax_element(both.begin(), both.end());
    double scale = 0.0;
    for (double v : computed) scale = std::max(scale, std::abs(v));
    const double drift = std::abs(last - before);
    if (drift > 0.25 * (*hi - *lo) && drift > 1e-4 * scale) {
      throw NumericalFailure("T^{-1} selection rule did not stabilize: the computed coefficients drift by " +
                             std::to_string(drift) + " between the last two windows");
    }
  }
  const double a0 = -last;
  std::vector<double> a(len);
  for (std::size_t j = 0; j < len; ++j) a[j] = partial[j] + a0;
  return {{CoeffSeq(std::move(a), Space::H2), f.tail_bound + std::abs(partial[len] + exact_a0)},
          len,
          std::abs(a0 - exact_a0)};
}

OperatorResult psi(const TruncatedSeries& f) {
  require_space(f, Space::L2Omega, "Psi");
  return {{f.seq.relabeled(Space::BergmanA), f.tail_bound}, f.seq.size(), 0.0};
}

std::vector<double> random_coeffs(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

struct Discrepancy {
  double sup = 0.0;
  double weighted = 0.0;
};

Discrepancy compare(const CoeffSeq& x, const CoeffSeq& y, std::size_t range) {
  std::vector<double> d(range);
  Discrepancy out;
  for (std::size_t i = 0; i < range; ++i) {
    d[i] = x.at(i) - y.at(i);
    out.sup = std::max(out.sup, std::abs(d[i]));
  }
  out.weighted = std::sqrt(std::max(0.0, kernels::weighted_dot2(
                                             d, d, x.space() == Space::H2 ? kernels::WeightKind::Unit
                                                                          : kernels::WeightKind::Bergman)));
  return out;
}

}  // namespace

double tail_window_mean(std::span<const double> v) {
  if (v.empty()) throw InvalidInput("window mean of an empty sequence");
  const std::size_t w = window_length(v.size());
  const auto window = v.subspan(v.size() - w);
  Neumaier num, den;
  for (std::size_t i = 0; i < w; ++i) {
    const double s = std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(w));
    num.add(s * s * window[i]);
    den.add(s * s);
  }
  return num.value() / den.value();
}

TruncatedSeries hk_coeffs(std::int64_t k, std::size_t n) {
  if (k < 2) throw InvalidInput("h_k is defined for k >= 2");
  if (n < 1) throw InvalidInput("need at least one coefficient");
  const double bound = kHkDecayConstant * static_cast<double>(k) * inverse_square_tail_root(n);
  return {CoeffSeq(hk_values(k, n), Space::H2), bound};
}

std::vector<double> hkc_partial_norms(std::int64_t k, double c, std::span<const std::size_t> lengths) {
  if (k < 2) throw InvalidInput("h_{k,c} is defined for k >= 2");
  if (!(c > 0.0)) throw InvalidInput("h_{k,c} needs c > 0");
  if (lengths.empty()) return {};
  const std::size_t longest = *std::max_element(lengths.begin(), lengths.end());
  std::vector<double> coeffs = hk_values(k, longest);
  const double shift = std::log(static_cast<double>(k) / c);
  for (double& x : coeffs) x += shift;

  std::vector<std::size_t> order(lengths.begin(), lengths.end());
  std::sort(order.begin(), order.end());
  std::vector<std::pair<std::size_t, double>> prefix;
  Neumaier acc;
  std::size_t done = 0;
  for (std::size_t len : order) {
    const std::span<const double> seg(coeffs.data() + done, len - done);
    acc.add(kernels::dot2(seg, seg));
    done = len;
    prefix.emplace_back(len, std::sqrt(acc.value()));
  }
  std::vector<double> out;
  for (std::size_t len : lengths) {
    out.push_back(std::lower_bound(prefix.begin(), prefix.end(), std::make_pair(len, -1.0))->second);
  }
  return out;
}

TruncatedSeries ims_hk_coeffs(std::int64_t k, std::size_t n) {
  if (k < 2) throw InvalidInput("(I - S)h_k is defined for k >= 2");
  if (n < 1) throw InvalidInput("need at least one coefficient");
  std::vector<double> c(n);
  c[0] = -std::log(static_cast<double>(k));
  const auto kk = static_cast<std::size_t>(k);
  for (std::size_t j = 1; j < n; ++j) {
    const double jd = static_cast<double>(j);
    c[j] = j % kk == 0 ? (1.0 - static_cast<double>(k)) / jd : 1.0 / jd;
  }
  return {CoeffSeq(std::move(c), Space::H2), static_cast<double>(k - 1) * inverse_square_tail_root(n)};
}

TruncatedSeries rk_sequence(std::int64_t k, std::size_t n) {
  if (k < 1) throw InvalidInput("r_k needs k >= 1");
  if (n < 1) throw InvalidInput("need at least one coefficient");
  std::vector<double> x(n);
  const auto kk = static_cast<std::size_t>(k);
  for (std::size_t p = 0; p < n; ++p) x[p] = static_cast<double>((p + 1) % kk);
  // sum_{m > N} (k-1)^2 / (m(m+1)) = (k-1)^2 / (N+1)
  const double bound = static_cast<double>(k - 1) / std::sqrt(static_cast<double>(n) + 1.0);
  return {CoeffSeq(std::move(x), Space::L2Omega), bound};
}

NamedFunction named_function_from_string(const std::string& name) {
  if (name == "L" || name == "L_log1mz") return NamedFunction::L_log1mz;
  if (name == "R" || name == "R_geom") return NamedFunction::R_geom;
  if (name == "R_k") return NamedFunction::R_k;
  if (name == "s_k") return NamedFunction::s_k;
  if (name == "One" || name == "1") return NamedFunction::One;
  if (name == "OneMinusZ") return NamedFunction::OneMinusZ;
  throw InvalidInput("unknown named function '" + name + "'");
}

TruncatedSeries named_function(NamedFunction name, std::size_t n, std::int64_t k) {
  if (n < 1) throw InvalidInput("need at least one coefficient");
  switch (name) {
    case NamedFunction::L_log1mz: {
      std::vector<double> c(n, 0.0);
      for (std::size_t j = 1; j < n; ++j) c[j] = -1.0 / static_cast<double>(j);
      return {CoeffSeq(std::move(c), Space::H2), inverse_square_tail_root(n)};
    }
    case NamedFunction::R_geom:
      return {CoeffSeq(std::vector<double>(n, 1.0), Space::BergmanA, 1.0), 0.0};
    case NamedFunction::R_k: {
      if (k < 1) throw InvalidInput("R_k needs k >= 1");
      return apply_operator(OperatorTag::psi(), rk_sequence(k, n)).out;
    }
    case NamedFunction::s_k: {
      if (k < 1) throw InvalidInput("s_k needs k >= 1");
      if (k == 1) return {CoeffSeq::zero(Space::H2, n), 0.0};
      // s_k = log k + (1 - z) h_k
      const OperatorResult ims = apply_operator(OperatorTag::i_minus_shift(), hk_coeffs(k, n));
      std::vector<double> c(ims.out.seq.coeffs().begin(), ims.out.seq.coeffs().end());
      c[0] += std::log(static_cast<double>(k));
      // Coefficients are (1 - k[k|j]) / j, whose tail is bounded in closed form.
      return {CoeffSeq(std::move(c), Space::H2), static_cast<double>(k - 1) * inverse_square_tail_root(n)};
    }
    case NamedFunction::One: {
      std::vector<double> c(n, 0.0);
      c[0] = 1.0;
      return {CoeffSeq(std::move(c), Space::H2), 0.0};
    }
    case NamedFunction::OneMinusZ: {
      std::vector<double> c(std::max<std::size_t>(n, 2), 0.0);
      c[0] = 1.0;
      c[1] = -1.0;
      return {CoeffSeq(std::move(c), Space::H2), 0.0};
    }
  }
  throw InvalidInput("unknown named function");
}

std::string to_string(const OperatorTag& tag) {
  switch (tag.kind) {
    case OperatorKind::Shift: return "S";
    case OperatorKind::IMinusShift: return "I-S";
    case OperatorKind::W: return "W_" + std::to_string(tag.n);
    case OperatorKind::Tn: return "T_" + std::to_string(tag.n);
    case OperatorKind::TMap: return "T";
    case OperatorKind::TInv: return "T^-1";
    case OperatorKind::Psi: return "Psi";
    case OperatorKind::Phi: return "Phi";
  }
  return "?";
}

double OperatorResult::certificate(std::size_t m) const {
  return out.tail_bound + offset_bound * std::sqrt(static_cast<double>(m));
}

OperatorResult apply_operator(const OperatorTag& tag, const TruncatedSeries& f) {
  switch (tag.kind) {
    case OperatorKind::Shift: return shift(f);
    case OperatorKind::IMinusShift: return i_minus_shift(f);
    case OperatorKind::W: return w_op(tag.n, f);
    case OperatorKind::Tn: return tn_op(tag.n, f);
    case OperatorKind::TMap: return t_map(f);
    case OperatorKind::TInv: return t_inv(f);
    case OperatorKind::Psi: return psi(f);
    case OperatorKind::Phi: return t_inv(psi(f).out);
  }
  throw InvalidInput("unknown operator");
}

std::string to_string(Identity id) {
  switch (id) {
    case Identity::SemigroupW: return "SemigroupW";
    case Identity::SemigroupT: return "SemigroupT";
    case Identity::Quasiconjugacy: return "Quasiconjugacy";
    case Identity::WnOnHk: return "WnOnHk";
    case Identity::PhiMapsRkToHk: return "PhiMapsRkToHk";
    case Identity::TIsometry: return "TIsometry";
    case Identity::PsiIsometry: return "PsiIsometry";
  }
  return "?";
}

Identity identity_from_string(const std::string& name) {
  for (Identity id : {Identity::SemigroupW, Identity::SemigroupT, Identity::Quasiconjugacy, Identity::WnOnHk,
                      Identity::PhiMapsRkToHk, Identity::TIsometry, Identity::PsiIsometry}) {
    if (to_string(id) == name) return id;
  }
  throw InvalidInput("unknown identity '" + name + "'");
}

IdentityReport verify_identity(Identity id, const IdentityParams& params, std::size_t n) {
  IdentityReport rep{id, params};
  rep.threshold = kIdentityTolerance;
  std::mt19937_64 rng(params.seed);
  try {
    switch (id) {
      case Identity::SemigroupW:
      case Identity::SemigroupT: {
        const bool is_w = id == Identity::SemigroupW;
        const auto op = [&](std::int64_t d) { return is_w ? OperatorTag::w(d) : OperatorTag::tn(d); };
        const CoeffSeq f(random_coeffs(rng, n), Space::H2);
        const CoeffSeq lhs = apply_operator(op(params.m), apply_operator(op(params.n), f).out).out.seq;
        const CoeffSeq rhs = apply_operator(op(params.m * params.n), f).out.seq;
        rep.reliable_range = n / static_cast<std::size_t>(params.m * params.n);
        const Discrepancy d = compare(lhs, rhs, rep.reliable_range);
        rep.sup_discrepancy = d.sup;
        rep.weighted_discrepancy = d.weighted;
        break;
      }
      case Identity::Quasiconjugacy: {
        const CoeffSeq f(random_coeffs(rng, n), Space::H2);
        const auto ims = OperatorTag::i_minus_shift();
        const CoeffSeq lhs = apply_operator(OperatorTag::tn(params.n), apply_operator(ims, f).out).out.seq;
        const CoeffSeq rhs = apply_operator(ims, apply_operator(OperatorTag::w(params.n), f).out).out.seq;
        rep.reliable_range = n / static_cast<std::size_t>(params.n);
        const Discrepancy d = compare(lhs, rhs, rep.reliable_range);
        rep.sup_discrepancy = d.sup;
        rep.weighted_discrepancy = d.weighted;
        break;
      }
      case Identity::WnOnHk: {
        if (params.k < 2) throw InvalidInput("WnOnHk needs k >= 2");
        require_positive_n(params.n);
        const CoeffSeq lhs = apply_operator(OperatorTag::w(params.n), hk_coeffs(params.k, n)).out.seq;
        const CoeffSeq rhs =
            axpy(-1.0, CoeffSeq(hk_values(params.n, n), Space::H2), CoeffSeq(hk_values(params.n * params.k, n), Space::H2));
        rep.reliable_range = n / static_cast<std::size_t>(params.n);
        const Discrepancy d = compare(lhs, rhs, rep.reliable_range);
        rep.sup_discrepancy = d.sup;
        rep.weighted_discrepancy = d.weighted;
        break;
      }
      case Identity::PhiMapsRkToHk: {
        if (params.k < 2) throw InvalidInput("PhiMapsRkToHk needs k >= 2");
        const OperatorResult phi = apply_operator(OperatorTag::phi(), rk_sequence(params.k, n));
        const CoeffSeq hk(hk_values(params.k, n), Space::H2);
        rep.reliable_range = n / 2;
        const Discrepancy d = compare(phi.out.seq, hk, rep.reliable_range);
        rep.sup_discrepancy = d.sup;
        rep.weighted_discrepancy = d.weighted;
        rep.threshold = phi.certificate(rep.reliable_range) + kIdentityTolerance;
        break;
      }
      case Identity::TIsometry: {
        std::uniform_int_distribution<std::size_t> deg(0, 64);
        const CoeffSeq g(random_coeffs(rng, deg(rng) + 1), Space::H2);
        const double image = norm(apply_operator(OperatorTag::t_map(), g).out.seq);
        const double base = norm(g);
        rep.reliable_range = g.size();
        rep.sup_discrepancy = std::abs(image - base) / base;
        rep.weighted_discrepancy = rep.sup_discrepancy;
        rep.threshold = 1e-12;
        break;
      }
      case Identity::PsiIsometry: {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const CoeffSeq x(random_coeffs(rng, n), Space::L2Omega, u(rng));
        const double image = norm(apply_operator(OperatorTag::psi(), x).out.seq);
        const double base = norm(x);
        rep.reliable_range = n;
        rep.sup_discrepancy = std::abs(image - base) / base;
        rep.weighted_discrepancy = rep.sup_discrepancy;
        rep.threshold = 1e-12;
        break;
      }
    }
    rep.pass = rep.sup_discrepancy <= rep.threshold && rep.weighted_discrepancy <= rep.threshold;
  } catch (const std::exception&) {
    rep.pass = false;
    rep.sup_discrepancy = rep.weighted_discrepancy = std::numeric_limits<double>::infinity();
  }
  return rep;
}

nlohmann::json to_json(const IdentityReport& r) {
  return {{"identity", to_string(r.identity)},
          {"params", {{"m", r.params.m}, {"n", r.params.n}, {"k", r.params.k}, {"seed", r.params.seed}}},
          {"sup_discrepancy", r.sup_discrepancy},
          {"weighted_discrepancy", r.weighted_discrepancy},
          {"reliable_range", r.reliable_range},
          {"threshold", r.threshold},
          {"pass", r.pass}};
}

}  // namespace bdlab
