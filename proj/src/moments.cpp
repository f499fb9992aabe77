#include "fbounds/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fbounds/bounds.hpp"
#include "fbounds/csp.hpp"
#include "fbounds/errors.hpp"
#include "fbounds/parallel.hpp"
#include "fbounds/rng.hpp"
#include "fbounds/sweep.hpp"

namespace fbounds {
namespace {

long double to_long_double(const Rational& x) {
  if (x == 0) return 0.0L;
  const long double magnitude = std::exp(log_abs(x));
  return x < 0 ? -magnitude : magnitude;
}

long double xlogx(long double x) { return x <= 0 ? 0.0L : x * std::log(x); }

void check_alpha(long double alpha) {
  if (!(alpha >= 0 && alpha <= 1))
    throw DomainError("alpha must lie in [0, 1], got " + format_real(static_cast<double>(alpha)));
}

void check_n(int n) {
  if (n < 1) throw ArgumentError("n must be >= 1");
}

bool is_solution_indicator(const BooleanFunction& f, const WeightFunction& w) {
  if (w.scale_sq != 1 || w.arity != f.arity()) return false;
  for (std::uint64_t i = 0; i < w.values.size(); ++i)
    if (w.values[i] != (f[i] ? 1 : 0)) return false;
  return true;
}

// Weight values over a common denominator: values[i] = nums[i] / denom.
struct ScaledValues {
  std::vector<Integer> nums;
  Integer denom = 1;
};

ScaledValues common_denominator(const WeightFunction& w) {
  ScaledValues out;
  for (const auto& v : w.values) mpz_lcm(out.denom.get_mpz_t(), out.denom.get_mpz_t(), v.get_den_mpz_t());
  out.nums.reserve(w.values.size());
  for (const auto& v : w.values) out.nums.push_back(Integer(v.get_num()) * (out.denom / Integer(v.get_den())));
  return out;
}

template <typename T>
struct ExhaustiveState {
  std::size_t choices = 0;
  std::size_t assignments = 0;
  std::vector<T> table;  // choices x assignments: value of one constraint draw per sigma
  Integer sum_y = 0;
  Integer sum_y2 = 0;
};

template <typename T>
void enumerate_draws(ExhaustiveState<T>& st, std::vector<std::vector<T>>& scratch, std::uint64_t depth,
                     std::uint64_t m) {
  const std::vector<T>& current = scratch[depth];
  if (depth == m) {
    T y = 0;
    for (const T& v : current) y += v;
    Integer yi;
    if constexpr (std::is_same_v<T, Integer>)
      yi = y;
    else
      yi = static_cast<long>(y);
    st.sum_y += yi;
    st.sum_y2 += yi * yi;
    return;
  }
  std::vector<T>& next = scratch[depth + 1];
  for (std::size_t c = 0; c < st.choices; ++c) {
    const T* row = &st.table[c * st.assignments];
    for (std::size_t s = 0; s < st.assignments; ++s) next[s] = current[s] * row[s];
    enumerate_draws(st, scratch, depth + 1, m);
  }
}

template <typename T>
std::pair<Integer, Integer> run_exhaustive(const std::vector<T>& nums, int k, int n, std::uint64_t m) {
  ExhaustiveState<T> st;
  std::size_t tuples = 1;
  for (int j = 0; j < k; ++j) tuples *= static_cast<std::size_t>(n);
  st.choices = tuples << k;
  st.assignments = std::size_t{1} << n;
  st.table.resize(st.choices * st.assignments);
  Constraint c;
  c.vars.resize(static_cast<std::size_t>(k));
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    for (int j = 0; j < k; ++j) {
      c.vars[j] = static_cast<std::uint32_t>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    for (std::uint32_t neg = 0; neg < (1u << k); ++neg) {
      c.negated = neg;
      T* row = &st.table[((t << k) | neg) * st.assignments];
      for (std::size_t sigma = 0; sigma < st.assignments; ++sigma) row[sigma] = nums[c.input_index(sigma)];
    }
  }
  std::vector<std::vector<T>> scratch(m + 1, std::vector<T>(st.assignments));
  std::fill(scratch[0].begin(), scratch[0].end(), T(1));
  enumerate_draws(st, scratch, 0, m);
  return {st.sum_y, st.sum_y2};
}

}  // namespace

WeightChoice parse_weight_choice(std::string_view text) {
  if (text == "f" || text == "raw") return WeightChoice::raw;
  if (text == "optimal") return WeightChoice::optimal;
  throw ArgumentError("weight must be 'f' or 'optimal', got '" + std::string(text) + "'");
}

WeightFunction choose_weight(const BooleanFunction& f, WeightChoice choice) {
  return choice == WeightChoice::raw ? weight_from_function(f) : optimal_weight(f);
}

Rational OverlapPolynomial::eval_exact(const Rational& alpha) const {
  const Rational x = 2 * alpha - 1;
  Rational acc = 0;
  for (std::size_t d = coeffs.size(); d-- > 0;) acc = acc * x + coeffs[d];
  return acc;
}

long double OverlapPolynomial::eval(long double alpha) const {
  const long double x = 2 * alpha - 1;
  long double acc = 0;
  for (std::size_t d = coeffs.size(); d-- > 0;) acc = acc * x + to_long_double(coeffs[d]);
  return acc;
}

OverlapPolynomial overlap_polynomial(const WeightFunction& w) {
  OverlapPolynomial p;
  p.coeffs.assign(static_cast<std::size_t>(w.arity) + 1, 0);
  for (std::uint64_t s = 0; s < w.spectrum.coeffs.size(); ++s) {
    const auto& c = w.spectrum[s];
    if (c != 0) p.coeffs[__builtin_popcountll(s)] += c * c;
  }
  for (auto& a : p.coeffs) {
    a *= w.scale_sq;
    a.canonicalize();
  }
  return p;
}

double gw_eval(const OverlapPolynomial& p, double alpha) {
  check_alpha(alpha);
  return static_cast<double>(p.eval(alpha));
}

long double psi_eval_precise(const OverlapPolynomial& p, long double r, long double alpha) {
  check_alpha(alpha);
  if (!(r > 0)) throw DomainError("r must be positive");
  const long double g = p.eval(std::max(alpha, 1 - alpha));
  if (!(g > 0)) throw DomainError("g_w is not positive at the evaluation point");
  return std::exp(r * std::log(g) - xlogx(alpha) - xlogx(1 - alpha));
}

double psi_eval(const OverlapPolynomial& p, double r, double alpha) {
  return static_cast<double>(psi_eval_precise(p, r, alpha));
}

double psi_eval_unsymmetrized(const OverlapPolynomial& p, double r, double alpha) {
  check_alpha(alpha);
  if (!(r > 0)) throw DomainError("r must be positive");
  const long double g = p.eval(alpha);
  if (g < 0) throw DomainError("g_w is negative at alpha; use the symmetrized psi");
  if (g == 0) return 0.0;
  return static_cast<double>(std::exp(r * std::log(g) - xlogx(alpha) - xlogx(1 - alpha)));
}

SqrtRational first_moment(const WeightFunction& w, int n, std::uint64_t m) {
  check_n(n);
  return SqrtRational(w.spectrum[0], w.scale_sq).pow(m) * pow2(n);
}

Rational second_moment(const WeightFunction& w, int n, std::uint64_t m) {
  check_n(n);
  const OverlapPolynomial p = overlap_polynomial(w);
  const int k = p.degree();
  // g(j/n) = (sum_d D a_d x^d n^(k-d)) / (D n^k) with x = 2j - n, so every term
  // shares the denominator (D n^k)^m and the sum stays in integers.
  Integer denom = 1;
  for (const auto& a : p.coeffs) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), a.get_den_mpz_t());
  std::vector<Integer> scaled;
  for (const auto& a : p.coeffs) scaled.push_back(Integer(a.get_num()) * (denom / Integer(a.get_den())));
  std::vector<Integer> n_pow(static_cast<std::size_t>(k) + 1, 1);
  for (int d = 1; d <= k; ++d) n_pow[d] = n_pow[d - 1] * n;

  Integer total = 0;
  Integer binom = 1;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    const Integer x = 2 * j - n;
    Integer numer = 0;
    Integer x_pow = 1;
    for (int d = 0; d <= k; ++d) {
      if (scaled[d] != 0) numer += scaled[d] * x_pow * n_pow[k - d];
      x_pow *= x;
    }
    Integer term;
    mpz_pow_ui(term.get_mpz_t(), numer.get_mpz_t(), m);
    total += binom * term;
  }
  Integer base = denom * n_pow[k];
  Integer full_denom;
  mpz_pow_ui(full_denom.get_mpz_t(), base.get_mpz_t(), m);
  Rational out(total << static_cast<unsigned>(n), full_denom);
  out.canonicalize();

  const Rational first_sq = first_moment(w, n, m).square();
  if (out < first_sq) throw std::logic_error("second moment below squared first moment");
  return out;
}

long double log_second_moment(const WeightFunction& w, int n, std::uint64_t m) {
  check_n(n);
  const OverlapPolynomial p = overlap_polynomial(w);
  std::vector<long double> logs;
  std::vector<int> signs;
  logs.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const long double g = p.eval(static_cast<long double>(j) / n);
    if (g == 0 && m > 0) continue;
    const long double log_binom = std::lgamma(n + 1.0L) - std::lgamma(j + 1.0L) - std::lgamma(n - j + 1.0L);
    logs.push_back(log_binom + static_cast<long double>(m) * std::log(std::fabs(g)));
    signs.push_back((g < 0 && (m % 2 == 1)) ? -1 : 1);
  }
  if (logs.empty()) return -std::numeric_limits<long double>::infinity();
  const long double top = *std::max_element(logs.begin(), logs.end());
  long double sum = 0;
  long double carry = 0;  // Kahan compensation
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const long double y = signs[i] * std::exp(logs[i] - top) - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  if (!(sum > 0)) throw std::logic_error("non-positive second moment in log-space evaluation");
  return std::log(sum) + top + n * std::log(2.0L);
}

MomentReport moment_report(const WeightFunction& w, int n, std::uint64_t m) {
  check_n(n);
  MomentReport out;
  out.n = n;
  out.m = m;
  if (n <= kExactMomentLimit) {
    out.first_moment = first_moment(w, n, m);
    out.second_moment = second_moment(w, n, m);
    out.log_first_moment = out.first_moment->log_abs();
    out.log_second_moment = log_abs(*out.second_moment);
  } else {
    out.log_first_moment =
        n * std::log(2.0L) + static_cast<long double>(m) * (log_abs(w.spectrum[0]) + 0.5L * log_abs(w.scale_sq));
    out.log_second_moment = log_second_moment(w, n, m);
  }
  if (w.spectrum[0] == 0) {
    out.ratio = 0;
  } else {
    out.ratio = static_cast<double>(std::exp(2 * out.log_first_moment - out.log_second_moment));
  }
  return out;
}

ExactMoments exhaustive_moments(const BooleanFunction& f, const WeightFunction& w, int n,
                                std::uint64_t m, std::uint64_t budget) {
  check_n(n);
  if (w.arity != f.arity()) throw ArgumentError("weight and constraint function arities differ");
  if (!w.supported_on(f)) throw ArgumentError("weight is not supported on the solution set of f");
  const int k = f.arity();
  const long double work = (k * std::log2(static_cast<long double>(n)) + k) * static_cast<long double>(m) + n;
  if (work > std::log2(static_cast<long double>(budget)) + 1e-9L)
    throw CapacityError("exhaustive enumeration needs 2^" + format_real(static_cast<double>(work)) +
                        " steps, over the budget");

  const ScaledValues sv = common_denominator(w);
  Integer max_abs = 0;
  for (const auto& v : sv.nums) max_abs = std::max(max_abs, Integer(abs(v)));
  // Products fit in int64 when max^m * 2^n < 2^62.
  const bool small = log_abs(max_abs) * static_cast<long double>(m) + n * std::log(2.0L) < 62 * std::log(2.0L);
  std::pair<Integer, Integer> sums;
  if (small) {
    std::vector<std::int64_t> nums;
    for (const auto& v : sv.nums) nums.push_back(v.get_si());
    sums = run_exhaustive(nums, k, n, m);
  } else {
    sums = run_exhaustive(sv.nums, k, n, m);
  }

  Integer draws = 1;
  for (int j = 0; j < k; ++j) draws *= n;
  draws <<= static_cast<unsigned>(k);
  Integer draws_m;
  mpz_pow_ui(draws_m.get_mpz_t(), draws.get_mpz_t(), m);
  Integer denom_m;
  mpz_pow_ui(denom_m.get_mpz_t(), sv.denom.get_mpz_t(), m);

  Rational mean_y(sums.first, draws_m * denom_m);
  mean_y.canonicalize();
  Rational mean_y2(sums.second, draws_m * denom_m * denom_m);
  mean_y2.canonicalize();
  ExactMoments out;
  out.first = SqrtRational(1, w.scale_sq).pow(m) * mean_y;
  out.second = mean_y2 * pow(w.scale_sq, m);
  out.second.canonicalize();
  return out;
}

McMoments mc_moments(const BooleanFunction& f, const WeightFunction& w, int n, std::uint64_t m,
                     std::uint64_t trials, std::uint64_t seed) {
  check_n(n);
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (w.arity != f.arity()) throw ArgumentError("weight and constraint function arities differ");
  if (n > kEnumerationLimit) throw CapacityError("n exceeds the enumeration limit");
  const bool counting = is_solution_indicator(f, w);
  std::vector<double> xs(trials);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t chunk) {
    const std::uint64_t end = std::min<std::uint64_t>(trials, (chunk + 1) * kChunk);
    for (std::uint64_t t = chunk * kChunk; t < end; ++t) {
      const CspInstance inst = sample_instance(f, n, m, SamplingMode::with_replacement, derive_seed(seed, t));
      xs[t] = counting ? static_cast<double>(count_solutions(inst)) : weighted_sum(inst, w);
    }
  });
  // Sums run in trial order so the result is independent of scheduling.
  long double sum = 0, sum2 = 0;
  for (double x : xs) {
    sum += x;
    sum2 += static_cast<long double>(x) * x;
  }
  const long double t = static_cast<long double>(trials);
  McMoments out;
  out.trials = trials;
  out.mean_x = static_cast<double>(sum / t);
  out.mean_x2 = static_cast<double>(sum2 / t);
  if (trials > 1) {
    long double var = 0, var2 = 0;
    for (double x : xs) {
      const long double dx = x - sum / t;
      const long double dx2 = static_cast<long double>(x) * x - sum2 / t;
      var += dx * dx;
      var2 += dx2 * dx2;
    }
    out.stderr_x = static_cast<double>(std::sqrt(var / (t - 1) / t));
    out.stderr_x2 = static_cast<double>(std::sqrt(var2 / (t - 1) / t));
  }
  return out;
}

std::vector<RatioPoint> ratio_curve(const BooleanFunction& f, WeightChoice choice, const Rational& r,
                                    std::span<const int> n_list) {
  if (r < 0) throw ArgumentError("density must be non-negative");
  for (int n : n_list)
    if (n < 2) throw ArgumentError("ratio curve needs n >= 2");
  const WeightFunction w = choose_weight(f, choice);
  std::vector<RatioPoint> out(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t i) {
    const int n = n_list[i];
    const std::uint64_t m = constraints_for_density(r, n);
    const MomentReport rep = moment_report(w, n, m);
    out[i] = RatioPoint{n, m, rep.ratio, 2 * rep.log_first_moment - rep.log_second_moment};
  });
  return out;
}

CurveKind parse_curve_kind(std::string_view text) {
  if (text == "gw") return CurveKind::gw;
  if (text == "psi") return CurveKind::psi;
  throw ArgumentError("curve kind must be 'gw' or 'psi', got '" + std::string(text) + "'");
}

std::vector<CurvePoint> curve_emit(CurveKind kind, const BooleanFunction& f, WeightChoice choice,
                                   std::optional<double> r, std::span<const double> alpha_grid) {
  if (kind == CurveKind::psi && !r) throw ArgumentError("psi curve needs a density r");
  for (double a : alpha_grid) check_alpha(a);
  const OverlapPolynomial p = overlap_polynomial(choose_weight(f, choice));
  std::vector<CurvePoint> out;
  out.reserve(alpha_grid.size());
  for (double a : alpha_grid)
    out.push_back({a, kind == CurveKind::gw ? gw_eval(p, a) : psi_eval(p, *r, a)});
  return out;
}

std::vector<double> alpha_grid(int steps) {
  if (steps < 1) throw ArgumentError("alpha grid needs at least one step");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) out.push_back(static_cast<double>(i) / steps);
  return out;
}

}  // namespace fbounds
