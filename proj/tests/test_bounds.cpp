#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fbounds/bounds.hpp"
#include "fbounds/errors.hpp"
#include "fbounds/parse.hpp"
#include "oracles.hpp"

using namespace fbounds;

namespace {

BooleanFunction fn(std::string_view spec) { return parse_function(spec); }

// Builtins with arity <= 8.
std::vector<std::string> small_builtins() {
  std::vector<std::string> out;
  for (int k = 1; k <= 8; ++k)
    for (const char* fam : {"ksat", "xorsat", "naesat", "mod3", "and", "or"})
      out.push_back(std::string(fam) + ":" + std::to_string(k));
  for (int k : {1, 3, 5, 7}) out.push_back("majority:" + std::to_string(k));
  out.push_back("majmaj:1");
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; a * b <= 8; ++b) {
      out.push_back("orxor:" + std::to_string(a) + "," + std::to_string(b));
      out.push_back("tribes:" + std::to_string(a) + "," + std::to_string(b));
    }
  return out;
}

Rational sum_sq_high_order(const WeightFunction& w) {
  Rational total = 0;
  for (std::uint64_t s = 0; s < w.values.size(); ++s)
    if (__builtin_popcountll(s) >= 2) total += w.squared_coeff(s);
  return total;
}

}  // namespace

TEST(SolutionMatrix, Columns) {
  const auto a = solution_matrix(fn("ksat:3"));
  EXPECT_EQ(a.rows(), 3);
  EXPECT_EQ(a.cols(), 7u);
  const auto dense = a.dense();
  for (std::size_t c = 0; c < 7; ++c) {
    const std::uint64_t index = c + 1;  // every index but 0, ascending
    for (int j = 0; j < 3; ++j) EXPECT_EQ(dense[j][c], oracle::sign_at(index, j));
  }
  const auto maj = solution_matrix(fn("majority:3"));
  EXPECT_EQ(maj.column_indices(), (std::vector<std::uint64_t>{3, 5, 6, 7}));
  const auto all = solution_matrix(fn("and:4"));
  EXPECT_EQ(all.column_indices(), (std::vector<std::uint64_t>{15}));
  EXPECT_THROW(solution_matrix(fn("const:3,0")), DegenerateFunctionError);
}

TEST(SolutionMatrix, RowProductsMatchDense) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = oracle::random_function(1 + static_cast<int>(seed % 9), seed);
    const auto a = solution_matrix(f);
    const auto dense = a.dense();
    const auto rp = a.row_products();
    for (int i = 0; i < a.rows(); ++i) {
      std::int64_t sum = 0;
      for (int x : dense[i]) sum += x;
      EXPECT_EQ(rp.row_sums[i], sum);
      for (int j = 0; j < a.rows(); ++j) {
        std::int64_t dot = 0;
        for (std::size_t c = 0; c < dense[i].size(); ++c) dot += dense[i][c] * dense[j][c];
        EXPECT_EQ(rp.at(i, j), dot);
      }
    }
  }
}

TEST(Projection, Examples) {
  EXPECT_EQ(projection_quadratic(solution_matrix(fn("ksat:3"))).q, Rational(3, 5));
  EXPECT_EQ(projection_quadratic(solution_matrix(fn("naesat:3"))).q, 0);
  const auto and3 = projection_quadratic(solution_matrix(fn("and:3")));
  EXPECT_EQ(and3.q, 1);
  EXPECT_EQ(and3.rank, 1);
}

TEST(Projection, BasisIsOrthogonalAndSpansRows) {
  for (const char* spec : {"ksat:3", "majority:5", "tribes:2,3", "mod3:4", "and:3"}) {
    const auto a = solution_matrix(fn(spec));
    const auto p = projection_quadratic(a);
    const auto basis = p.row_basis(a);
    ASSERT_EQ(static_cast<int>(basis.size()), p.rank);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        Rational dot = 0;
        for (std::size_t c = 0; c < basis[i].size(); ++c) dot += basis[i][c] * basis[j][c];
        if (i == j) EXPECT_EQ(dot, p.basis_norms[i]) << spec;
        else EXPECT_EQ(dot, 0) << spec;
      }
    // (A⁺A1)(u) = gamma . u reproduces the projection norm q = <P1, 1>.
    Rational total = 0;
    for (std::uint64_t u : a.column_indices())
      for (int j = 0; j < a.rows(); ++j) total += p.ones_projection[j] * oracle::sign_at(u, j);
    EXPECT_EQ(total, p.q) << spec;
  }
}

TEST(Projection, MatchesRankFactorizationOnBuiltins) {
  for (const auto& spec : small_builtins()) {
    const auto f = fn(spec);
    if (f.popcount() == 0) continue;
    EXPECT_EQ(projection_quadratic(solution_matrix(f)).q, oracle::projection_q(f)) << spec;
  }
}

TEST(ComputeC, Examples) {
  EXPECT_EQ(compute_c(fn("ksat:3")), Rational(4, 5));
  EXPECT_EQ(compute_c(fn("naesat:3")), Rational(3, 4));
  EXPECT_EQ(compute_c(fn("majority:3")), Rational(1, 8));
  EXPECT_EQ(compute_c_via_b(fn("ksat:3")), Rational(4, 5));
  EXPECT_EQ(compute_c_via_b(fn("naesat:3")), Rational(3, 4));
  EXPECT_EQ(compute_c_via_b(fn("majority:3")), Rational(1, 8));
  EXPECT_THROW(compute_c(fn("const:2,0")), DegenerateFunctionError);
  // AND_k has a single column, so its rows are dependent for k >= 2.
  EXPECT_THROW(compute_c_via_b(fn("and:3")), RankDeficiencyError);
}

TEST(ComputeC, BMatrixEntries) {
  const auto spec = transform(fn("ksat:3"));
  const auto b = b_matrix(spec);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(b.at(i, j), i == j ? Rational(7, 8) : Rational(-1, 8));
}

TEST(ComputeC, RandomFunctionsAgreeWithBothOracles) {
  int full_rank = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int k = 1 + static_cast<int>(seed % 8);
    const auto f = oracle::random_function(k, derive_seed(17, seed));
    const Rational c = compute_c(f);
    ASSERT_EQ(c, oracle::c_value(f)) << "seed " << seed;
    if (projection_quadratic(solution_matrix(f)).rank == k) {
      ++full_rank;
      EXPECT_EQ(compute_c_via_b(f), c) << "seed " << seed;
    } else {
      EXPECT_THROW(compute_c_via_b(f), RankDeficiencyError) << "seed " << seed;
    }
  }
  EXPECT_GT(full_rank, 300);
}

TEST(Threshold, Examples) {
  for (int k = 2; k <= 10; ++k) {
    const auto b = threshold_bounds(builtin("xorsat", std::vector<int>{k}));
    EXPECT_EQ(b.c, Rational(1, 2));
    EXPECT_EQ(*b.r_low, Rational(1, 2));
    EXPECT_NEAR(b.r_up, 1.0, 1e-12);
  }
  const auto nae = threshold_bounds(fn("naesat:3"));
  EXPECT_EQ(*nae.r_low, Rational(3, 2));
  EXPECT_NEAR(nae.r_up, std::log(2.0) / std::log(4.0 / 3.0), 1e-12);
  EXPECT_EQ(nae.r_up_log_arg, Rational(4, 3));
  const auto sat = threshold_bounds(fn("ksat:3"));
  EXPECT_EQ(*sat.r_low, 2);
  EXPECT_NEAR(sat.r_up, 5.190893, 1e-6);
  EXPECT_NEAR(sat.r_max, std::log(2.0) / std::log(5.0 / 4.0), 1e-12);
  EXPECT_EQ(*threshold_bounds(fn("naesat:4")).r_low, Rational(7, 2));
}

TEST(Threshold, DegenerateBranches) {
  const auto and2 = threshold_bounds(fn("and(x1,x2)"));
  EXPECT_EQ(and2.c, 0);
  EXPECT_EQ(*and2.r_low, 0);
  EXPECT_EQ(and2.r_max, 0.0);
  EXPECT_FALSE(and2.symmetrizable());
  const auto one = threshold_bounds(fn("const:3"));
  EXPECT_TRUE(one.always_satisfiable);
  EXPECT_FALSE(one.r_low.has_value());
  EXPECT_TRUE(std::isinf(one.r_up));
  EXPECT_THROW(threshold_bounds(fn("const:3,0")), DegenerateFunctionError);
}

TEST(Threshold, InvariantsOnBuiltins) {
  for (const auto& spec : small_builtins()) {
    const auto f = fn(spec);
    if (f.popcount() == 0 || f.is_constant_one()) continue;
    const auto b = threshold_bounds(f);
    EXPECT_GE(b.c, 0) << spec;
    EXPECT_LE(b.c, b.f_hat_empty) << spec;
    EXPECT_LT(b.f_hat_empty, 1) << spec;
    EXPECT_EQ(*b.r_low, b.c / (2 * (1 - b.c))) << spec;
    EXPECT_EQ(*b.r_low == 0, b.c == 0) << spec;
    EXPECT_LE(b.r_max, b.r_up * (1 + 1e-12)) << spec;
    // r_low <= r_max is not guaranteed in general; a violation would be a finding.
    EXPECT_LE(b.r_low_real, b.r_max * (1 + 1e-12)) << spec;
    bool symmetric = true;
    for (std::uint64_t i = 0; i < f.size(); ++i) symmetric &= f[i] == f[(f.size() - 1) ^ i];
    if (symmetric) EXPECT_EQ(b.c, b.f_hat_empty) << spec;
  }
}

TEST(Reference, ClosedForms) {
  EXPECT_EQ(reference_bounds("majority", std::vector<int>{3}), Rational(1, 14));
  EXPECT_EQ(reference_bounds("naesat", std::vector<int>{5}), Rational(15, 2));
  EXPECT_EQ(reference_bounds("orxor", std::vector<int>{2, 3}), Rational(7, 2));
  EXPECT_EQ(reference_bounds("xorsat", std::vector<int>{4}), Rational(1, 2));
  EXPECT_THROW(reference_bounds("ksat", std::vector<int>{3}), NoClosedFormError);
  EXPECT_THROW(reference_bounds("mod3", std::vector<int>{6}), NoClosedFormError);
  // Direct evaluation of the binomial expression for k = 5: C(4,2) = 6.
  const Rational t = Rational(5 * 36);
  Rational maj5 = (Rational(1, 2) - t / 512) / (1 + t / 256);
  maj5.canonicalize();
  EXPECT_EQ(reference_bounds("majority", std::vector<int>{5}), maj5);
  // a-MAJ of 3-MAJ with a = 3: C(2,1) = 2, so 3a C^2 = 36; c = 7/32 and r_low = 7/50.
  Rational mm3 = (Rational(1, 2) - Rational(36, 128)) / (1 + Rational(36, 64));
  mm3.canonicalize();
  EXPECT_EQ(reference_bounds("majmaj", std::vector<int>{3}), mm3);
  EXPECT_EQ(mm3, Rational(7, 50));
}

TEST(OptimalWeight, Certificate) {
  for (const auto& spec : small_builtins()) {
    const auto f = fn(spec);
    if (f.popcount() == 0) continue;
    const Rational c = compute_c(f);
    if (c == 0) {
      EXPECT_THROW(optimal_weight(f), NoSymmetrizableWeightError) << spec;
      continue;
    }
    const auto w = optimal_weight(f);
    EXPECT_TRUE(w.supported_on(f)) << spec;
    for (int j = 0; j < f.arity(); ++j) EXPECT_EQ(w.spectrum[std::uint64_t{1} << j], 0) << spec;
    EXPECT_EQ(w.squared_coeff(0), c) << spec;
    EXPECT_EQ(w.norm_sq(), 1) << spec;
    EXPECT_EQ(sum_sq_high_order(w), 1 - c) << spec;
    EXPECT_EQ(weight_density_bound(w), *threshold_bounds(f).r_low) << spec;
    // Spectrum consistent with the stored values.
    EXPECT_EQ(w.spectrum.coeffs, oracle::fourier(w.values, w.arity)) << spec;
  }
}

TEST(OptimalWeight, Examples) {
  const auto nae = optimal_weight(fn("naesat:3"));
  EXPECT_EQ(nae.coeff(0).square(), Rational(3, 4));
  EXPECT_GT(nae.coeff(0).to_double(), 0);
  const auto sat = optimal_weight(fn("ksat:3"));
  EXPECT_EQ(sat.coeff(0).square(), Rational(4, 5));
  EXPECT_THROW(optimal_weight(fn("and:3")), NoSymmetrizableWeightError);
}
