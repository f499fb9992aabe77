#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fbounds/rational.hpp"

// Boolean constraint functions f : {-1,1}^k -> {0,1} and their Fourier spectra.
//
// Encoding used everywhere in this library:
//   * table index i encodes the sign vector u(i): bit (j-1) of i is 1 <=> u_j = +1,
//     so u_1 is the least-significant bit;
//   * +1 plays the role of "true";
//   * subsets S of [k] are bitmasks with bit (j-1) set <=> j in S.

namespace fbounds {

inline constexpr int kDefaultArityCap = 24;

/// Sign vector (entries -1/+1) for table index `index`.
std::vector<int> assignment_of(std::uint64_t index, int arity);
/// Table index of a sign vector; throws ArgumentError on entries other than +-1.
std::uint64_t index_of(std::span<const int> u);

/// chi_S(u) for table index u and subset mask S.
inline int parity_character(std::uint64_t subset, std::uint64_t index) {
  // u_j = -1 exactly where bit j of index is 0.
  return (__builtin_popcountll(subset & ~index) & 1) ? -1 : 1;
}

class BooleanFunction {
 public:
  /// `words` holds 2^arity bits, least-significant bit first; bits past 2^arity must be 0.
  BooleanFunction(int arity, std::vector<std::uint64_t> words, std::string name = {});

  /// Tabulates `pred(index)` over all 2^arity indices.
  static BooleanFunction from_predicate(int arity, const std::function<bool(std::uint64_t)>& pred,
                                        std::string name = {}, int arity_cap = kDefaultArityCap);

  int arity() const { return arity_; }
  std::uint64_t size() const { return std::uint64_t{1} << arity_; }
  const std::string& name() const { return name_; }
  BooleanFunction with_name(std::string name) const;

  bool operator[](std::uint64_t index) const { return ((*words_)[index >> 6] >> (index & 63)) & 1; }
  /// f(u) for a sign vector of length arity().
  bool eval(std::span<const int> u) const;

  std::span<const std::uint64_t> words() const { return *words_; }
  /// |U|, the number of satisfying assignments.
  std::uint64_t popcount() const;
  bool is_constant_one() const { return popcount() == size(); }

  /// Satisfying table indices in ascending order.
  std::vector<std::uint64_t> solutions() const;

  /// Hex form of the table (most-significant digit first, bit i = f(u(i))).
  std::string to_hex() const;

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.arity_ == b.arity_ && *a.words_ == *b.words_;
  }

 private:
  int arity_;
  std::shared_ptr<const std::vector<std::uint64_t>> words_;
  std::string name_;
};

/// 2^k exact coefficients indexed by subset mask.
struct FourierSpectrum {
  int arity = 0;
  std::vector<Rational> coeffs;

  const Rational& operator[](std::uint64_t subset) const { return coeffs[subset]; }
  /// Sum of squared coefficients.
  Rational norm_sq() const;
  /// (f^({1}), ..., f^({k})).
  std::vector<Rational> first_order() const;
};

/// w(u) = sqrt(scale_sq) * values[u]. Keeping the scale apart lets weights whose
/// normalization is irrational still have exactly checkable squared spectra.
struct WeightFunction {
  int arity = 0;
  std::vector<Rational> values;
  Rational scale_sq{1};
  FourierSpectrum spectrum;  ///< transform of `values`, i.e. without the scale

  /// w^(S)^2, exact.
  Rational squared_coeff(std::uint64_t subset) const { return scale_sq * spectrum[subset] * spectrum[subset]; }
  SqrtRational coeff(std::uint64_t subset) const { return SqrtRational(spectrum[subset], scale_sq); }
  SqrtRational value(std::uint64_t index) const { return SqrtRational(values[index], scale_sq); }
  double value_real(std::uint64_t index) const { return value(index).to_double(); }
  /// ||w||^2 = (1/2^k) sum_u w(u)^2.
  Rational norm_sq() const;
  /// True iff w(u) = 0 wherever f(u) = 0.
  bool supported_on(const BooleanFunction& f) const;
};

/// Exact f^(S) = (1/2^k) sum_u f(u) chi_S(u), via an O(k 2^k) fast Walsh-Hadamard transform.
FourierSpectrum transform(const BooleanFunction& f);
/// Same transform for an arbitrary rational-valued table of length 2^k.
FourierSpectrum transform(std::span<const Rational> values);
/// v(u) = sum_S spec[S] chi_S(u).
std::vector<Rational> inverse_transform(const FourierSpectrum& spectrum);

/// w = f (so X counts solutions).
WeightFunction weight_from_function(const BooleanFunction& f);
WeightFunction make_weight(std::vector<Rational> values, Rational scale_sq = 1);

/// outer(inner_1(block_1), ..., inner_b(block_b)) over consecutive blocks; inner
/// output 0/1 becomes the sign -1/+1 fed to the outer function.
BooleanFunction compose(const BooleanFunction& outer, std::span<const BooleanFunction> inners,
                        int arity_cap = kDefaultArityCap);

/// Builtin families:
///   ksat:k  xorsat:k  naesat:k  majority:k (odd)  mod3:k  and:k  or:k  const:k[,v]
///   majmaj:a (odd, arity 3a)  orxor:a,b (OR of b XORs of a)  tribes:a,b (OR of b ANDs of a)
bool is_builtin_family(std::string_view family);
BooleanFunction builtin(std::string_view family, std::span<const int> params,
                        int arity_cap = kDefaultArityCap);

}  // namespace fbounds
