#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fbounds/boolfn.hpp"
#include "fbounds/rational.hpp"

namespace fbounds {

/// A Aᵀ and A·1 for the solution matrix, as integers.
struct RowProducts {
  int k = 0;
  std::uint64_t cols = 0;
  std::vector<std::int64_t> gram;      ///< k*k, row-major: sum over u in U of u_i u_j
  std::vector<std::int64_t> row_sums;  ///< k: sum over u in U of u_i

  std::int64_t at(int i, int j) const { return gram[static_cast<std::size_t>(i) * k + j]; }
};

/// The k x |U| matrix A whose columns are the satisfying assignments of f, in
/// ascending table-index order. Columns are not stored; they are the set bits of f.
class SolutionMatrix {
 public:
  explicit SolutionMatrix(BooleanFunction f);

  const BooleanFunction& function() const { return f_; }
  int rows() const { return f_.arity(); }
  std::uint64_t cols() const { return cols_; }

  /// Table index of each column.
  std::vector<std::uint64_t> column_indices() const { return f_.solutions(); }
  /// Dense +-1 matrix, row-major k x |U|. Intended for small functions.
  std::vector<std::vector<int>> dense() const;

  /// Bit-sliced over 64 table entries at a time; reads A directly, not the spectrum.
  RowProducts row_products() const;

 private:
  BooleanFunction f_;
  std::uint64_t cols_;
};

/// Throws DegenerateFunctionError for unsatisfiable f.
SolutionMatrix solution_matrix(const BooleanFunction& f);

/// Projection of the all-ones vector onto the row space of A.
///
/// The orthogonal row-space basis is kept in coefficient form: basis vector p is
/// r_p = sum_j basis_coeffs[p][j] * (row j of A).
struct ProjectionSummary {
  int rank = 0;
  Rational q;  ///< 1ᵀ A⁺A 1
  std::vector<std::vector<Rational>> basis_coeffs;
  std::vector<Rational> basis_norms;     ///< <r_p, r_p>
  std::vector<Rational> basis_dot_ones;  ///< <r_p, 1>
  /// gamma with A⁺A 1 = Aᵀ gamma, i.e. (A⁺A 1)(u) = sum_j gamma_j u_j.
  std::vector<Rational> ones_projection;

  /// The basis vectors themselves, each of length |U|.
  std::vector<std::vector<Rational>> row_basis(const SolutionMatrix& a) const;
};

/// Exact Gram-Schmidt on the rows of A (zero rows are dropped, so rank
/// detection is exact); q = sum_p <r_p,1>^2 / <r_p,r_p>.
ProjectionSummary projection_quadratic(const SolutionMatrix& a);

/// c = f^(∅) - 1ᵀA⁺A1 / 2^k.
Rational compute_c(const BooleanFunction& f);

/// k x k, B_ii = f^(∅), B_ij = f^({i,j}).
struct BMatrix {
  int k = 0;
  std::vector<Rational> entries;

  const Rational& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * k + j]; }
};

BMatrix b_matrix(const FourierSpectrum& spectrum);

/// c = f^(∅) - f1ᵀ B⁻¹ f1 with f1 the first-order coefficients. Only valid
/// when A has full row rank; throws RankDeficiencyError when B is singular.
Rational compute_c_via_b(const BooleanFunction& f);

struct ThresholdBounds {
  int arity = 0;
  std::uint64_t solution_count = 0;
  int rank = 0;
  Rational f_hat_empty;
  Rational q;
  Rational c;
  /// Set unless always_satisfiable.
  std::optional<Rational> r_low;
  double r_low_real = 0.0;
  /// r_up = log 2 / log(r_up_log_arg), r_up_log_arg = 1/f^(∅).
  double r_up = 0.0;
  Rational r_up_log_arg;
  /// r_max = log 2 / log(r_max_log_arg), r_max_log_arg = 1/c; 0 when c = 0.
  double r_max = 0.0;
  Rational r_max_log_arg;
  /// f is constant one: every instance is satisfiable, r_up = r_max = r_low = inf.
  bool always_satisfiable = false;
  /// c = 0: no weight supported on U has vanishing first-order coefficients.
  bool symmetrizable() const { return c > 0; }
};

/// Throws DegenerateFunctionError for unsatisfiable f.
ThresholdBounds threshold_bounds(const BooleanFunction& f);

/// Closed-form lower bounds for the families where one exists:
/// xorsat:k, naesat:k, majority:k, majmaj:a, orxor:a,b. ksat and mod3 only
/// have asymptotic forms and throw NoClosedFormError.
Rational reference_bounds(std::string_view family, std::span<const int> params);

/// Weight maximizing w^(∅)^2 subject to ||w|| = 1, zero first-order
/// coefficients and support inside U: values = (I - A⁺A)1 on U,
/// scale_sq = 2^k / (|U| - q). Throws NoSymmetrizableWeightError when c = 0.
WeightFunction optimal_weight(const BooleanFunction& f);

/// (1/2) w^(∅)^2 / sum_{|S|>=2} w^(S)^2, the density up to which a weight with
/// vanishing first-order coefficients keeps the second-moment ratio bounded.
Rational weight_density_bound(const WeightFunction& w);

}  // namespace fbounds
