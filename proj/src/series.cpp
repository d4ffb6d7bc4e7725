#include "hypsing/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypsing {

namespace {

constexpr double kLeadTolerance = 1e-12;
constexpr double kVanishing = 1e-14;

bool vanishes(Complex c, const TruncatedSeries& a) {
  return std::abs(c) <= kVanishing * std::max(1.0, a.max_abs());
}

void require_same_order(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order()) {
    fail(ErrorKind::Series, "truncation orders differ: " +
                                std::to_string(a.order()) + " vs " +
                                std::to_string(b.order()));
  }
}

void require_same_lead(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (std::abs(a.lead() - b.lead()) > kLeadTolerance) {
    fail(ErrorKind::Series, "cannot add series with different lead exponents");
  }
}

void require_integral_lead(const TruncatedSeries& a, const char* op) {
  if (a.lead() != 0.0) {
    fail(ErrorKind::Series, std::string(op) + " requires lead exponent 0");
  }
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<Complex> coeffs, double lead)
    : coeffs_(std::move(coeffs)), lead_(lead) {
  if (coeffs_.size() < 2) {
    fail(ErrorKind::Series, "truncation order must be at least 1");
  }
  if (!std::isfinite(lead_)) fail(ErrorKind::Series, "lead exponent is not finite");
}

TruncatedSeries TruncatedSeries::zero(int order, double lead) {
  return TruncatedSeries(std::vector<Complex>(std::max(order, 0) + 1), lead);
}

TruncatedSeries TruncatedSeries::constant(Complex value, int order) {
  auto s = zero(order);
  s.coeffs_[0] = value;
  return s;
}

TruncatedSeries TruncatedSeries::identity(int order) {
  auto s = zero(order);
  s.coeffs_[1] = 1.0;
  return s;
}

Complex TruncatedSeries::operator[](int n) const {
  if (n < 0 || n > order()) {
    fail(ErrorKind::Series, "coefficient index " + std::to_string(n) +
                                " outside 0.." + std::to_string(order()));
  }
  return coeffs_[static_cast<std::size_t>(n)];
}

TruncatedSeries TruncatedSeries::with_order(int order) const {
  std::vector<Complex> c(static_cast<std::size_t>(std::max(order, 0)) + 1);
  std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
  return TruncatedSeries(std::move(c), lead_);
}

TruncatedSeries TruncatedSeries::with_lead(double lead) const {
  return TruncatedSeries(coeffs_, lead);
}

Complex TruncatedSeries::eval_polynomial(Complex w) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
  return acc;
}

Complex TruncatedSeries::eval_polynomial_derivative(Complex w, int derivative) const {
  if (derivative < 0) fail(ErrorKind::Series, "negative derivative order");
  Complex acc = 0.0;
  for (int n = order(); n >= derivative; --n) {
    double falling = 1.0;
    for (int j = 0; j < derivative; ++j) falling *= static_cast<double>(n - j);
    acc = acc * w + falling * coeffs_[static_cast<std::size_t>(n)];
  }
  return acc;
}

Complex TruncatedSeries::eval(Complex w) const {
  const Complex poly = eval_polynomial(w);
  if (lead_ == 0.0) return poly;
  if (w == Complex{}) fail(ErrorKind::Domain, "fractional power evaluated at 0");
  return std::exp(lead_ * std::log(w)) * poly;
}

double TruncatedSeries::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  require_same_lead(a, b);
  std::vector<Complex> c(a.coeffs().begin(), a.coeffs().end());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] += b.coeffs()[n];
  return TruncatedSeries(std::move(c), a.lead());
}

TruncatedSeries operator-(const TruncatedSeries& a) { return Complex{-1.0} * a; }

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return a + (-b);
}

TruncatedSeries operator*(Complex s, const TruncatedSeries& a) {
  std::vector<Complex> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x *= s;
  return TruncatedSeries(std::move(c), a.lead());
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  const int n_max = a.order();
  std::vector<Complex> c(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    Complex acc = 0.0;
    for (int j = 0; j <= n; ++j) acc += a.coeffs()[j] * b.coeffs()[n - j];
    c[n] = acc;
  }
  return TruncatedSeries(std::move(c), a.lead() + b.lead());
}

TruncatedSeries series_exp(const TruncatedSeries& a) {
  require_integral_lead(a, "series_exp");
  const Complex c0 = a.coeffs()[0];
  if (!vanishes(c0, a)) fail(ErrorKind::Series, "series_exp requires a zero constant term");
  const int n_max = a.order();
  std::vector<Complex> b(static_cast<std::size_t>(n_max) + 1);
  b[0] = std::exp(c0);
  for (int n = 1; n <= n_max; ++n) {
    Complex acc = 0.0;
    for (int j = 1; j <= n; ++j) acc += static_cast<double>(j) * a.coeffs()[j] * b[n - j];
    b[n] = acc / static_cast<double>(n);
  }
  return TruncatedSeries(std::move(b));
}

TruncatedSeries series_log(const TruncatedSeries& a) {
  require_integral_lead(a, "series_log");
  const Complex c0 = a.coeffs()[0];
  if (vanishes(c0, a)) fail(ErrorKind::Series, "series_log requires a nonzero constant term");
  const int n_max = a.order();
  std::vector<Complex> l(static_cast<std::size_t>(n_max) + 1);
  l[0] = std::log(c0);
  for (int n = 1; n <= n_max; ++n) {
    Complex acc = static_cast<double>(n) * a.coeffs()[n];
    for (int j = 1; j < n; ++j) acc -= static_cast<double>(j) * l[j] * a.coeffs()[n - j];
    l[n] = acc / (static_cast<double>(n) * c0);
  }
  return TruncatedSeries(std::move(l));
}

TruncatedSeries series_pow(const TruncatedSeries& a, double p) {
  if (!std::isfinite(p)) fail(ErrorKind::Series, "series_pow exponent is not finite");
  const Complex c0 = a.coeffs()[0];
  if (vanishes(c0, a)) fail(ErrorKind::Series, "series_pow requires a nonzero constant term");
  const int n_max = a.order();
  std::vector<Complex> b(static_cast<std::size_t>(n_max) + 1);
  b[0] = std::exp(p * std::log(c0));
  // a * b' = p * a' * b, solved order by order.
  for (int n = 1; n <= n_max; ++n) {
    Complex acc = 0.0;
    for (int j = 1; j <= n; ++j) {
      acc += (p * j - (n - j)) * a.coeffs()[j] * b[n - j];
    }
    b[n] = acc / (static_cast<double>(n) * c0);
  }
  return TruncatedSeries(std::move(b), a.lead() * p);
}

TruncatedSeries series_compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
  require_same_order(outer, inner);
  require_integral_lead(outer, "series_compose (outer)");
  require_integral_lead(inner, "series_compose (inner)");
  if (inner.coeffs()[0] != Complex{}) {
    fail(ErrorKind::Series, "series_compose requires inner series with zero constant term");
  }
  const int n_max = outer.order();
  auto acc = TruncatedSeries::constant(outer.coeffs()[n_max], n_max);
  for (int n = n_max - 1; n >= 0; --n) {
    acc = series_mul(acc, inner) + TruncatedSeries::constant(outer.coeffs()[n], n_max);
  }
  return acc;
}

TruncatedSeries series_reversion(const TruncatedSeries& a) {
  require_integral_lead(a, "series_reversion");
  if (a.coeffs()[0] != Complex{}) {
    fail(ErrorKind::Series, "series_reversion requires a zero constant term");
  }
  if (vanishes(a.coeffs()[1], a)) {
    fail(ErrorKind::Series, "series_reversion requires a nonzero linear coefficient");
  }
  const int n_max = a.order();
  // h = a / w, known through index N-1; b_n = [w^(n-1)] h^(-n) / n.
  std::vector<Complex> h(static_cast<std::size_t>(n_max) + 1);
  for (int j = 0; j < n_max; ++j) h[j] = a.coeffs()[j + 1];
  const TruncatedSeries hs(std::move(h));
  std::vector<Complex> b(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) {
    b[n] = series_pow(hs, -static_cast<double>(n)).coeffs()[n - 1] / static_cast<double>(n);
  }
  return TruncatedSeries(std::move(b));
}

double max_coeff_distance(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  double d = 0.0;
  for (int n = 0; n <= a.order(); ++n) d = std::max(d, std::abs(a.coeffs()[n] - b.coeffs()[n]));
  return d;
}

LaurentWindow::LaurentWindow(int max_index) : LaurentWindow(max_index, {}) {}

LaurentWindow::LaurentWindow(int max_index, std::vector<Complex> coeffs)
    : max_index_(max_index), coeffs_(std::move(coeffs)) {
  if (max_index < kMinIndex) fail(ErrorKind::Series, "empty Laurent window");
  const auto size = static_cast<std::size_t>(max_index - kMinIndex + 1);
  if (coeffs_.empty()) coeffs_.assign(size, Complex{});
  if (coeffs_.size() != size) fail(ErrorKind::Series, "Laurent window size mismatch");
}

std::size_t LaurentWindow::slot(int index) const {
  if (index < kMinIndex || index > max_index_) {
    fail(ErrorKind::Series, "Laurent index " + std::to_string(index) + " outside window");
  }
  return static_cast<std::size_t>(index - kMinIndex);
}

Complex LaurentWindow::at(int index) const { return coeffs_[slot(index)]; }

void LaurentWindow::set(int index, Complex value) { coeffs_[slot(index)] = value; }

}  // namespace hypsing
