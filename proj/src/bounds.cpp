#include "fbounds/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fbounds/errors.hpp"

namespace fbounds {
namespace {

// Lane patterns for index bits 0..5 inside one 64-bit table word.
constexpr std::uint64_t kLanePattern[6] = {
    0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
    0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL,
};

std::uint64_t lane_mask(int bit, std::size_t word) {
  if (bit < 6) return kLanePattern[bit];
  return ((word >> (bit - 6)) & 1) ? ~std::uint64_t{0} : 0;
}

std::string subset_label(int k) { return "arity " + std::to_string(k); }

}  // namespace

SolutionMatrix::SolutionMatrix(BooleanFunction f) : f_(std::move(f)), cols_(f_.popcount()) {}

std::vector<std::vector<int>> SolutionMatrix::dense() const {
  const auto cols = column_indices();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(rows()), std::vector<int>(cols.size()));
  for (int i = 0; i < rows(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) out[i][c] = ((cols[c] >> i) & 1) ? 1 : -1;
  return out;
}

RowProducts SolutionMatrix::row_products() const {
  const int k = rows();
  RowProducts out;
  out.k = k;
  out.cols = cols_;
  // plus[i]: columns with u_i = +1; differ[i][j]: columns with u_i != u_j.
  std::vector<std::uint64_t> plus(static_cast<std::size_t>(k), 0);
  std::vector<std::uint64_t> differ(static_cast<std::size_t>(k) * k, 0);
  const auto words = f_.words();
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(k));
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t bits = words[w];
    if (bits == 0) continue;
    for (int i = 0; i < k; ++i) masks[i] = lane_mask(i, w);
    for (int i = 0; i < k; ++i) {
      plus[i] += static_cast<std::uint64_t>(__builtin_popcountll(bits & masks[i]));
      for (int j = i + 1; j < k; ++j)
        differ[static_cast<std::size_t>(i) * k + j] +=
            static_cast<std::uint64_t>(__builtin_popcountll(bits & (masks[i] ^ masks[j])));
    }
  }
  const auto total = static_cast<std::int64_t>(cols_);
  out.row_sums.resize(static_cast<std::size_t>(k));
  out.gram.assign(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    out.row_sums[i] = 2 * static_cast<std::int64_t>(plus[i]) - total;
    out.gram[static_cast<std::size_t>(i) * k + i] = total;
    for (int j = i + 1; j < k; ++j) {
      const std::int64_t g = total - 2 * static_cast<std::int64_t>(differ[static_cast<std::size_t>(i) * k + j]);
      out.gram[static_cast<std::size_t>(i) * k + j] = g;
      out.gram[static_cast<std::size_t>(j) * k + i] = g;
    }
  }
  return out;
}

SolutionMatrix solution_matrix(const BooleanFunction& f) {
  SolutionMatrix a(f);
  if (a.cols() == 0)
    throw DegenerateFunctionError("constraint function has no satisfying assignment (" +
                                  subset_label(f.arity()) + ")");
  return a;
}

std::vector<std::vector<Rational>> ProjectionSummary::row_basis(const SolutionMatrix& a) const {
  const auto dense = a.dense();
  std::vector<std::vector<Rational>> out;
  for (const auto& coeffs : basis_coeffs) {
    std::vector<Rational> v(a.cols(), 0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] == 0) continue;
      for (std::size_t c = 0; c < v.size(); ++c) v[c] += coeffs[j] * dense[j][c];
    }
    out.push_back(std::move(v));
  }
  return out;
}

ProjectionSummary projection_quadratic(const SolutionMatrix& a) {
  const RowProducts rp = a.row_products();
  const int k = rp.k;
  ProjectionSummary out;
  out.q = 0;
  out.ones_projection.assign(static_cast<std::size_t>(k), 0);

  // Basis vectors live in coefficient form, so every inner product goes through
  // the Gram matrix: <sum c_j a_j, sum d_j a_j> = cᵀ G d, <sum c_j a_j, 1> = cᵀ (A1).
  auto gram_times = [&](const std::vector<Rational>& c) {
    std::vector<Rational> g(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (c[j] != 0) g[i] += c[j] * rp.at(i, j);
    return g;
  };

  std::vector<std::vector<Rational>> gram_of_basis;  // G r_p in coefficient form
  for (int row = 0; row < k; ++row) {
    std::vector<Rational> c(static_cast<std::size_t>(k), 0);
    c[row] = 1;
    for (std::size_t p = 0; p < out.basis_coeffs.size(); ++p) {
      // <a_row, r_p> = (G c_p)_row
      const Rational mu = gram_of_basis[p][row] / out.basis_norms[p];
      if (mu == 0) continue;
      for (int j = 0; j < k; ++j) c[j] -= mu * out.basis_coeffs[p][j];
    }
    std::vector<Rational> gc = gram_times(c);
    Rational norm = 0;
    for (int j = 0; j < k; ++j) norm += c[j] * gc[j];
    if (norm == 0) continue;  // row already in the span
    if (norm < 0) throw std::logic_error("negative Gram norm in projection");
    Rational dot = 0;
    for (int j = 0; j < k; ++j) dot += c[j] * rp.row_sums[j];
    out.q += dot * dot / norm;
    const Rational weight = dot / norm;
    for (int j = 0; j < k; ++j) out.ones_projection[j] += weight * c[j];
    out.basis_coeffs.push_back(std::move(c));
    out.basis_norms.push_back(std::move(norm));
    out.basis_dot_ones.push_back(std::move(dot));
    gram_of_basis.push_back(std::move(gc));
  }
  out.rank = static_cast<int>(out.basis_coeffs.size());
  if (out.q < 0 || out.q > Rational(static_cast<unsigned long>(a.cols())))
    throw std::logic_error("projection quadratic out of range: " + to_string(out.q));
  return out;
}

Rational compute_c(const BooleanFunction& f) {
  const SolutionMatrix a = solution_matrix(f);
  const ProjectionSummary proj = projection_quadratic(a);
  Rational c = (Rational(static_cast<unsigned long>(a.cols())) - proj.q) / pow2(f.arity());
  if (c < 0) throw std::logic_error("negative c: " + to_string(c));
  return c;
}

BMatrix b_matrix(const FourierSpectrum& spectrum) {
  BMatrix b;
  b.k = spectrum.arity;
  b.entries.resize(static_cast<std::size_t>(b.k) * b.k);
  for (int i = 0; i < b.k; ++i)
    for (int j = 0; j < b.k; ++j)
      b.entries[static_cast<std::size_t>(i) * b.k + j] =
          i == j ? spectrum[0] : spectrum[(std::uint64_t{1} << i) | (std::uint64_t{1} << j)];
  return b;
}

Rational compute_c_via_b(const BooleanFunction& f) {
  if (f.popcount() == 0) throw DegenerateFunctionError("constraint function has no satisfying assignment");
  const FourierSpectrum spectrum = transform(f);
  const BMatrix b = b_matrix(spectrum);
  const int k = b.k;
  const std::vector<Rational> first = spectrum.first_order();

  // Solve B x = first by exact Gauss-Jordan elimination on [B | first].
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    m[i].reserve(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j < k; ++j) m[i].push_back(b.at(i, j));
    m[i].push_back(first[i]);
  }
  for (int col = 0; col < k; ++col) {
    int pivot = -1;
    for (int r = col; r < k; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0)
      throw RankDeficiencyError("B is singular (rows of A are linearly dependent); use compute_c");
    std::swap(m[col], m[pivot]);
    const Rational inv = 1 / m[col][col];
    for (int j = col; j <= k; ++j) m[col][j] *= inv;
    for (int r = 0; r < k; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (int j = col; j <= k; ++j) m[r][j] -= factor * m[col][j];
    }
  }
  Rational correction = 0;
  for (int i = 0; i < k; ++i) correction += first[i] * m[i][k];
  return spectrum[0] - correction;
}

ThresholdBounds threshold_bounds(const BooleanFunction& f) {
  const SolutionMatrix a = solution_matrix(f);
  const ProjectionSummary proj = projection_quadratic(a);
  ThresholdBounds out;
  out.arity = f.arity();
  out.solution_count = a.cols();
  out.rank = proj.rank;
  out.q = proj.q;
  out.f_hat_empty = Rational(static_cast<unsigned long>(a.cols())) / pow2(f.arity());
  out.f_hat_empty.canonicalize();
  out.c = (Rational(static_cast<unsigned long>(a.cols())) - proj.q) / pow2(f.arity());
  out.c.canonicalize();
  if (out.c < 0 || out.c > out.f_hat_empty) throw std::logic_error("c outside [0, f^(empty)]");

  const double inf = std::numeric_limits<double>::infinity();
  if (f.is_constant_one()) {
    out.always_satisfiable = true;
    out.r_low_real = out.r_up = out.r_max = inf;
    out.r_up_log_arg = out.r_max_log_arg = 1;
    return out;
  }
  const long double log2 = std::log(2.0L);
  out.r_low = out.c / (2 * (1 - out.c));
  out.r_low->canonicalize();
  out.r_low_real = out.r_low->get_d();
  out.r_up_log_arg = 1 / out.f_hat_empty;
  out.r_up = static_cast<double>(log2 / log_abs(out.r_up_log_arg));
  if (out.c == 0) {
    out.r_max = 0;
    out.r_max_log_arg = 0;
  } else {
    out.r_max_log_arg = 1 / out.c;
    out.r_max = static_cast<double>(log2 / log_abs(out.r_max_log_arg));
  }
  if (out.r_max > out.r_up * (1 + 1e-12))
    throw std::logic_error("symmetrized ceiling exceeds the first-moment bound");
  return out;
}

namespace {

// (1/2 - t * num_scale) / (1 + t * den_scale) with t = m * C(a-1,(a-1)/2)^2.
Rational majority_formula(int a, int multiplier, std::int64_t num_exp, std::int64_t den_exp) {
  const Integer central = binomial(static_cast<std::uint64_t>(a - 1), static_cast<std::uint64_t>((a - 1) / 2));
  const Rational t = Rational(Integer(multiplier) * a * central * central);
  Rational out = (Rational(1, 2) - t * pow2(num_exp)) / (1 + t * pow2(den_exp));
  out.canonicalize();
  return out;
}

int single_param(std::string_view family, std::span<const int> params) {
  if (params.size() != 1) throw ArgumentError(std::string(family) + " takes one parameter");
  if (params[0] < 1) throw ArgumentError(std::string(family) + " parameter must be >= 1");
  return params[0];
}

}  // namespace

Rational reference_bounds(std::string_view family, std::span<const int> params) {
  if (family == "xorsat") {
    single_param(family, params);
    return Rational(1, 2);
  }
  if (family == "naesat") {
    const int k = single_param(family, params);
    if (k < 2) throw ArgumentError("naesat reference needs k >= 2");
    Rational out = pow2(k - 2) - Rational(1, 2);
    out.canonicalize();
    return out;
  }
  if (family == "majority") {
    const int k = single_param(family, params);
    if (k % 2 == 0) throw ArgumentError("majority needs odd k");
    return majority_formula(k, 1, -2 * k + 1, -2 * k + 2);
  }
  if (family == "majmaj") {
    const int a = single_param(family, params);
    if (a % 2 == 0) throw ArgumentError("majmaj needs odd a");
    // The denominator exponent is -2a: with the often-quoted -2a-2 the value
    // no longer equals c/(2(1-c)) and tends to about 0.233 instead of 0.177.
    return majority_formula(a, 3, -2 * a - 1, -2 * a);
  }
  if (family == "orxor") {
    if (params.size() != 2 || params[0] < 1 || params[1] < 1)
      throw ArgumentError("orxor takes two parameters a,b >= 1");
    Rational out = pow2(params[1] - 1) - Rational(1, 2);
    out.canonicalize();
    return out;
  }
  if (family == "ksat" || family == "mod3")
    throw NoClosedFormError("no exact closed-form reference bound for " + std::string(family) +
                            " (only an asymptotic form is known)");
  throw NoClosedFormError("no reference bound for family '" + std::string(family) + "'");
}

WeightFunction optimal_weight(const BooleanFunction& f) {
  const SolutionMatrix a = solution_matrix(f);
  const ProjectionSummary proj = projection_quadratic(a);
  const Rational residual = Rational(static_cast<unsigned long>(a.cols())) - proj.q;  // 1ᵀ(I - A⁺A)1
  if (residual == 0)
    throw NoSymmetrizableWeightError(
        "c = 0: the all-ones vector lies in the row space of A, so no weight supported on the "
        "solution set has vanishing first-order coefficients");
  std::vector<Rational> values(f.size(), 0);
  const int k = f.arity();
  for (std::uint64_t u : a.column_indices()) {
    Rational projected = 0;
    for (int j = 0; j < k; ++j) {
      if (proj.ones_projection[j] == 0) continue;
      if ((u >> j) & 1)
        projected += proj.ones_projection[j];
      else
        projected -= proj.ones_projection[j];
    }
    values[u] = 1 - projected;
  }
  Rational scale_sq = pow2(k) / residual;
  scale_sq.canonicalize();
  return make_weight(std::move(values), std::move(scale_sq));
}

Rational weight_density_bound(const WeightFunction& w) {
  Rational higher = 0;
  for (std::uint64_t s = 0; s < w.values.size(); ++s)
    if (__builtin_popcountll(s) >= 2) higher += w.squared_coeff(s);
  if (higher == 0) throw DomainError("weight has no Fourier mass at order >= 2");
  Rational out = w.squared_coeff(0) / (2 * higher);
  out.canonicalize();
  return out;
}

}  // namespace fbounds
