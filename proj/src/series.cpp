#include "bdlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdlab/error.hpp"
#include "bdlab/kernels.hpp"

namespace bdlab {

std::string_view to_string(Space s) {
  switch (s) {
    case Space::H2: return "H2";
    case Space::BergmanA: return "BergmanA";
    case Space::L2Omega: return "L2Omega";
  }
  return "?";
}

Space space_from_string(std::string_view name) {
  if (name == "H2") return Space::H2;
  if (name == "BergmanA") return Space::BergmanA;
  if (name == "L2Omega") return Space::L2Omega;
  throw InvalidInput("unknown space '" + std::string(name) + "'");
}

double space_weight(Space s, std::size_t p) {
  if (s == Space::H2) return 1.0;
  const double q = static_cast<double>(p);
  return 1.0 / ((q + 1.0) * (q + 2.0));
}

double tail_weight(Space s, std::size_t n) {
  if (s == Space::H2) return 0.0;
  // sum_{p >= n} 1/((p+1)(p+2)) telescopes to 1/(n+1).
  return 1.0 / (static_cast<double>(n) + 1.0);
}

namespace {

kernels::WeightKind weight_kind(Space s) {
  return s == Space::H2 ? kernels::WeightKind::Unit : kernels::WeightKind::Bergman;
}

void require_same_space(const CoeffSeq& f, const CoeffSeq& g) {
  if (f.space() != g.space()) {
    throw InvalidInput("space mismatch: " + std::string(to_string(f.space())) + " vs " +
                       std::string(to_string(g.space())));
  }
}

}  // namespace

CoeffSeq::CoeffSeq(std::vector<double> coeffs, Space space, double tail)
    : coeffs_(std::move(coeffs)), space_(space), tail_(tail) {
  if (coeffs_.empty()) throw InvalidInput("a coefficient sequence needs at least one entry");
  if (!std::isfinite(tail_)) throw InvalidInput("non-finite tail constant");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidInput("non-finite coefficient");
  }
  if (space_ == Space::H2 && tail_ != 0.0) {
    throw InvalidInput("an H2 sequence cannot have a nonzero constant tail");
  }
}

CoeffSeq CoeffSeq::zero(Space space, std::size_t n) {
  return CoeffSeq(std::vector<double>(std::max<std::size_t>(n, 1), 0.0), space);
}

CoeffSeq CoeffSeq::monomial(std::size_t power, Space space, double value) {
  std::vector<double> c(power + 1, 0.0);
  c[power] = value;
  return CoeffSeq(std::move(c), space);
}

CoeffSeq CoeffSeq::padded(std::size_t n) const {
  if (n <= coeffs_.size()) return *this;
  std::vector<double> c(coeffs_);
  c.resize(n, tail_);
  return CoeffSeq(std::move(c), space_, tail_);
}

CoeffSeq CoeffSeq::relabeled(Space space) const { return CoeffSeq(coeffs_, space, tail_); }

bool CoeffSeq::is_zero() const {
  return tail_ == 0.0 && std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double inner_product(const CoeffSeq& f, const CoeffSeq& g) {
  require_same_space(f, g);
  const std::size_t n = std::max(f.size(), g.size());
  const CoeffSeq fp = f.padded(n);
  const CoeffSeq gp = g.padded(n);
  const double body = kernels::weighted_dot2(fp.coeffs(), gp.coeffs(), weight_kind(f.space()));
  if (f.tail() == 0.0 || g.tail() == 0.0) return body;
  return body + f.tail() * g.tail() * tail_weight(f.space(), n);
}

double norm(const CoeffSeq& f) { return std::sqrt(std::max(0.0, inner_product(f, f))); }

std::complex<double> evaluate(const CoeffSeq& f, std::complex<double> z) {
  if (std::abs(z) >= 1.0) throw InvalidInput("evaluation point must lie in the open unit disk");
  const auto c = f.coeffs();
  std::complex<double> acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  if (f.tail() != 0.0) {
    acc += f.tail() * std::pow(z, static_cast<double>(c.size())) / (1.0 - z);
  }
  return acc;
}

Evaluation evaluate(const TruncatedSeries& f, std::complex<double> z) {
  const std::complex<double> v = evaluate(f.seq, z);
  const double r2 = std::norm(z);
  return {v, f.tail_bound / std::sqrt(1.0 - r2)};
}

CoeffSeq axpy(double alpha, const CoeffSeq& x, const CoeffSeq& y) {
  require_same_space(x, y);
  const std::size_t n = std::max(x.size(), y.size());
  const CoeffSeq xp = x.padded(n);
  const CoeffSeq yp = y.padded(n);
  std::vector<double> out(yp.coeffs().begin(), yp.coeffs().end());
  kernels::axpy(alpha, xp.coeffs(), out);
  return CoeffSeq(std::move(out), y.space(), y.tail() + alpha * x.tail());
}

CoeffSeq scale(double alpha, const CoeffSeq& x) {
  std::vector<double> out(x.size(), 0.0);
  kernels::axpy(alpha, x.coeffs(), out);
  return CoeffSeq(std::move(out), x.space(), alpha * x.tail());
}

CoeffSeq shift_pad(const CoeffSeq& x, std::size_t shift, std::size_t length) {
  const std::size_t n = std::max(length, x.size() + shift);
  std::vector<double> out(n, x.tail());
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(shift), 0.0);
  std::copy(x.coeffs().begin(), x.coeffs().end(), out.begin() + static_cast<std::ptrdiff_t>(shift));
  return CoeffSeq(std::move(out), x.space(), x.tail());
}

TruncatedSeries truncate(const TruncatedSeries& f, std::size_t n) {
  if (n == 0) throw InvalidInput("cannot truncate to zero coefficients");
  if (n >= f.seq.size()) return f;
  const auto c = f.seq.coeffs();
  std::vector<double> dropped(c.begin() + static_cast<std::ptrdiff_t>(n), c.end());
  for (double& d : dropped) d -= f.seq.tail();
  const double dropped_norm2 = kernels::weighted_dot2(dropped, dropped, weight_kind(f.seq.space()), n);
  std::vector<double> kept(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n));
  return {CoeffSeq(std::move(kept), f.seq.space(), f.seq.tail()),
          f.tail_bound + std::sqrt(std::max(0.0, dropped_norm2))};
}

}  // namespace bdlab
