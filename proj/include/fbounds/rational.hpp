#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace fbounds {

using Rational = mpq_class;
using Integer = mpz_class;

/// Exact value coeff * sqrt(radicand), radicand >= 0. Normalized so that a
/// perfect-square radicand is folded into coeff (radicand == 1 then).
class SqrtRational {
 public:
  SqrtRational() : coeff_(0), radicand_(1) {}
  explicit SqrtRational(Rational value) : coeff_(std::move(value)), radicand_(1) {}
  SqrtRational(Rational coeff, Rational radicand);

  const Rational& coeff() const { return coeff_; }
  const Rational& radicand() const { return radicand_; }

  bool is_rational() const { return radicand_ == 1 || coeff_ == 0; }
  /// Throws std::logic_error unless is_rational().
  Rational as_rational() const;
  Rational square() const { return coeff_ * coeff_ * radicand_; }

  SqrtRational pow(std::uint64_t e) const;
  friend SqrtRational operator*(const SqrtRational& a, const SqrtRational& b);
  friend SqrtRational operator*(const SqrtRational& a, const Rational& b);
  friend bool operator==(const SqrtRational& a, const SqrtRational& b) {
    return a.coeff_ == b.coeff_ && a.radicand_ == b.radicand_;
  }

  double to_double() const;
  /// Natural log of |value|; -inf for zero.
  long double log_abs() const;
  /// "p/q" when rational, otherwise "p/q*sqrt(a/b)".
  std::string str() const;

 private:
  void normalize();

  Rational coeff_;
  Rational radicand_;
};

/// Natural log of |x| without going through double (safe for huge/tiny values).
long double log_abs(const Integer& x);
long double log_abs(const Rational& x);

/// Exact sqrt if x is the square of a rational.
bool exact_sqrt(const Rational& x, Rational& root);

Rational pow(const Rational& base, std::uint64_t e);
Rational pow2(std::int64_t e);
Integer binomial(std::uint64_t n, std::uint64_t k);

/// Round to nearest integer, ties away from zero toward +inf (ties up).
Integer round_half_up(const Rational& x);

/// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& x);
Rational parse_rational(const std::string& text);

/// Reals with 12 significant digits; "inf"/"-inf"/"nan" for non-finite.
std::string format_real(double x);

}  // namespace fbounds
