#pragma once

// Truncated power series in w with an optional real leading exponent,
//
//   w^lead * (c_0 + c_1 w + ... + c_N w^N) + O(w^(lead+N+1)).
//
// All operations are exact modulo the truncation: no coefficient beyond
// index N is ever consulted, and nothing is flushed to zero.

#include <span>
#include <vector>

#include "hypsing/core.hpp"

namespace hypsing {

inline constexpr int kDefaultTruncationOrder = 32;

class TruncatedSeries {
 public:
  /// coeffs.size() == N + 1 with N >= 1.
  explicit TruncatedSeries(std::vector<Complex> coeffs, double lead = 0.0);

  static TruncatedSeries zero(int order, double lead = 0.0);
  static TruncatedSeries constant(Complex value, int order);
  /// The series w (lead 0).
  static TruncatedSeries identity(int order);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double lead() const noexcept { return lead_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex operator[](int n) const;

  /// Same coefficients, truncated or zero-padded to a new order.
  TruncatedSeries with_order(int order) const;
  TruncatedSeries with_lead(double lead) const;

  /// Polynomial part only, ignoring the leading power.
  Complex eval_polynomial(Complex w) const;
  /// Derivative of the polynomial part.
  Complex eval_polynomial_derivative(Complex w, int derivative) const;
  /// Full value with w^lead taken on the principal branch.
  Complex eval(Complex w) const;

  double max_abs() const noexcept;

 private:
  std::vector<Complex> coeffs_;
  double lead_ = 0.0;
};

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a);
TruncatedSeries operator*(Complex s, const TruncatedSeries& a);

/// Cauchy product; lead exponents add.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// exp(a) for a with zero constant term and lead 0, via (exp a)' = a' exp a.
TruncatedSeries series_exp(const TruncatedSeries& a);

/// Principal logarithm of a series with nonzero constant term and lead 0.
TruncatedSeries series_log(const TruncatedSeries& a);

/// a^p with the principal branch of c_0^p; the lead exponent is multiplied by p.
TruncatedSeries series_pow(const TruncatedSeries& a, double p);

/// outer(inner(w)), Horner evaluation in the series algebra.
TruncatedSeries series_compose(const TruncatedSeries& outer,
                               const TruncatedSeries& inner);

/// Compositional inverse b with a(b(w)) = w, by Lagrange inversion.
TruncatedSeries series_reversion(const TruncatedSeries& a);

/// Largest coefficientwise distance; orders must agree.
double max_coeff_distance(const TruncatedSeries& a, const TruncatedSeries& b);

/// Laurent coefficients c_{-2} .. c_N. Out-of-range access is an error.
class LaurentWindow {
 public:
  static constexpr int kMinIndex = -2;

  explicit LaurentWindow(int max_index);
  LaurentWindow(int max_index, std::vector<Complex> coeffs);

  int min_index() const noexcept { return kMinIndex; }
  int max_index() const noexcept { return max_index_; }
  Complex at(int index) const;
  void set(int index, Complex value);

 private:
  std::size_t slot(int index) const;

  int max_index_;
  std::vector<Complex> coeffs_;
};

}  // namespace hypsing
