#include "fbounds/rational.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fbounds/errors.hpp"

namespace fbounds {

SqrtRational::SqrtRational(Rational coeff, Rational radicand)
    : coeff_(std::move(coeff)), radicand_(std::move(radicand)) {
  if (radicand_ < 0) throw DomainError("negative radicand");
  normalize();
}

void SqrtRational::normalize() {
  coeff_.canonicalize();
  radicand_.canonicalize();
  if (coeff_ == 0 || radicand_ == 0) {
    coeff_ = 0;
    radicand_ = 1;
    return;
  }
  Rational root;
  if (exact_sqrt(radicand_, root)) {
    coeff_ *= root;
    radicand_ = 1;
  }
}

Rational SqrtRational::as_rational() const {
  if (!is_rational()) throw std::logic_error("value is irrational: " + str());
  return coeff_;
}

SqrtRational SqrtRational::pow(std::uint64_t e) const {
  SqrtRational out;
  out.coeff_ = fbounds::pow(coeff_, e) * fbounds::pow(radicand_, e / 2);
  out.radicand_ = (e % 2 == 1) ? radicand_ : Rational(1);
  out.normalize();
  return out;
}

SqrtRational operator*(const SqrtRational& a, const SqrtRational& b) {
  return SqrtRational(a.coeff_ * b.coeff_, a.radicand_ * b.radicand_);
}

SqrtRational operator*(const SqrtRational& a, const Rational& b) {
  return SqrtRational(a.coeff_ * b, a.radicand_);
}

double SqrtRational::to_double() const {
  if (coeff_ == 0) return 0.0;
  const long double magnitude = std::exp(log_abs());
  return static_cast<double>(coeff_ < 0 ? -magnitude : magnitude);
}

long double SqrtRational::log_abs() const {
  if (coeff_ == 0) return -std::numeric_limits<long double>::infinity();
  return fbounds::log_abs(coeff_) + 0.5L * fbounds::log_abs(radicand_);
}

std::string SqrtRational::str() const {
  if (is_rational()) return to_string(coeff_);
  return to_string(coeff_) + "*sqrt(" + to_string(radicand_) + ")";
}

long double log_abs(const Integer& x) {
  if (x == 0) return -std::numeric_limits<long double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
  return std::log(std::fabs(static_cast<long double>(mantissa))) +
         static_cast<long double>(exponent) * std::log(2.0L);
}

long double log_abs(const Rational& x) {
  if (x == 0) return -std::numeric_limits<long double>::infinity();
  return log_abs(Integer(x.get_num())) - log_abs(Integer(x.get_den()));
}

bool exact_sqrt(const Rational& x, Rational& root) {
  if (x < 0) return false;
  const Integer num = x.get_num();
  const Integer den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return false;
  root = Rational(sqrt(num), sqrt(den));
  root.canonicalize();
  return true;
}

Rational pow(const Rational& base, std::uint64_t e) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational pow2(std::int64_t e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer round_half_up(const Rational& x) {
  Integer out;
  const Integer twice_num = 2 * Integer(x.get_num()) + Integer(x.get_den());
  const Integer twice_den = 2 * Integer(x.get_den());
  mpz_fdiv_q(out.get_mpz_t(), twice_num.get_mpz_t(), twice_den.get_mpz_t());
  return out;
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(const std::string& text) {
  // Accepts "p", "p/q" and plain decimals such as "1.25".
  try {
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
      Rational out(text, 10);
      if (out.get_den() == 0) throw ArgumentError("zero denominator in '" + text + "'");
      out.canonicalize();
      return out;
    }
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad decimal");
    std::string digits = text.substr(0, dot) + frac;
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational out(Integer(digits, 10), scale);
    out.canonicalize();
    return out;
  } catch (const std::invalid_argument&) {
    throw ArgumentError("not a rational number: '" + text + "'");
  }
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace fbounds
