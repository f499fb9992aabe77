#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fbounds/boolfn.hpp"
#include "fbounds/rational.hpp"

namespace fbounds {

enum class WeightChoice {
  raw,      ///< w = f, X counts solutions
  optimal,  ///< symmetrized weight from optimal_weight()
};
WeightChoice parse_weight_choice(std::string_view text);
WeightFunction choose_weight(const BooleanFunction& f, WeightChoice choice);

/// g_w(alpha) = sum_d a_d (2 alpha - 1)^d with a_d = sum_{|S|=d} w^(S)^2.
struct OverlapPolynomial {
  std::vector<Rational> coeffs;  ///< a_0 .. a_k

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Rational eval_exact(const Rational& alpha) const;
  long double eval(long double alpha) const;
};

OverlapPolynomial overlap_polynomial(const WeightFunction& w);

/// g_w(alpha); DomainError outside [0, 1].
double gw_eval(const OverlapPolynomial& p, double alpha);

/// psi_r(alpha) = g_w(max(alpha, 1-alpha))^r / (alpha^alpha (1-alpha)^(1-alpha)), 0^0 = 1.
/// DomainError when alpha is outside [0,1], r <= 0 or g at the evaluation point is <= 0.
double psi_eval(const OverlapPolynomial& p, double r, double alpha);
/// Same in extended precision, for finite differences around 1/2.
long double psi_eval_precise(const OverlapPolynomial& p, long double r, long double alpha);
/// Unsymmetrized g_w(alpha)^r / (alpha^alpha (1-alpha)^(1-alpha)); diagnostics only.
double psi_eval_unsymmetrized(const OverlapPolynomial& p, double r, double alpha);

/// E[X] = 2^n w^(∅)^m under with-replacement sampling.
SqrtRational first_moment(const WeightFunction& w, int n, std::uint64_t m);
/// E[X^2] = 2^n sum_j C(n,j) g_w(j/n)^m, exact.
Rational second_moment(const WeightFunction& w, int n, std::uint64_t m);
/// log E[X^2] by signed log-sum-exp with compensated summation, for large n.
long double log_second_moment(const WeightFunction& w, int n, std::uint64_t m);

/// Largest n for which moment_report/ratio_curve use exact sums.
inline constexpr int kExactMomentLimit = 300;

struct MomentReport {
  int n = 0;
  std::uint64_t m = 0;
  std::optional<SqrtRational> first_moment;  ///< empty past kExactMomentLimit
  std::optional<Rational> second_moment;
  long double log_first_moment = 0;
  long double log_second_moment = 0;
  double ratio = 0;  ///< E[X]^2 / E[X^2]
};

MomentReport moment_report(const WeightFunction& w, int n, std::uint64_t m);

struct ExactMoments {
  SqrtRational first;
  Rational second;
};

/// Oracle: averages X and X^2 over all (n^k 2^k)^m with-replacement constraint
/// draws, each X by enumerating all 2^n assignments. CapacityError when the
/// work (n^k 2^k)^m 2^n exceeds `budget`.
ExactMoments exhaustive_moments(const BooleanFunction& f, const WeightFunction& w, int n,
                                std::uint64_t m, std::uint64_t budget = std::uint64_t{1} << 28);

struct McMoments {
  std::uint64_t trials = 0;
  double mean_x = 0;
  double mean_x2 = 0;
  double stderr_x = 0;
  double stderr_x2 = 0;
};

/// Monte Carlo estimate over with-replacement instances; trial t is sampled
/// from derive_seed(seed, t), so results do not depend on thread count.
McMoments mc_moments(const BooleanFunction& f, const WeightFunction& w, int n, std::uint64_t m,
                     std::uint64_t trials, std::uint64_t seed);

struct RatioPoint {
  int n = 0;
  std::uint64_t m = 0;
  double ratio = 0;
  long double log_ratio = 0;
};

/// E[X]^2/E[X^2] for each n with m = round(r n).
std::vector<RatioPoint> ratio_curve(const BooleanFunction& f, WeightChoice choice, const Rational& r,
                                    std::span<const int> n_list);

enum class CurveKind { gw, psi };
CurveKind parse_curve_kind(std::string_view text);

struct CurvePoint {
  double alpha = 0;
  double value = 0;
};

/// ArgumentError for psi without r.
std::vector<CurvePoint> curve_emit(CurveKind kind, const BooleanFunction& f, WeightChoice choice,
                                   std::optional<double> r, std::span<const double> alpha_grid);

/// 0, 1/steps, ..., 1.
std::vector<double> alpha_grid(int steps);

}  // namespace fbounds
