#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "fbounds/bounds.hpp"
#include "fbounds/csp.hpp"
#include "fbounds/errors.hpp"
#include "fbounds/parse.hpp"
#include "fbounds/sweep.hpp"
#include "oracles.hpp"

using namespace fbounds;

namespace {

BooleanFunction fn(std::string_view spec) { return parse_function(spec); }

Constraint make_constraint(std::vector<std::uint32_t> vars, std::uint32_t negated) {
  Constraint c;
  c.vars = std::move(vars);
  c.negated = negated;
  return c;
}

}  // namespace

TEST(Sampling, WithoutReplacementInvariants) {
  const auto f = fn("ksat:3");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = sample_instance(f, 6, 100, SamplingMode::without_replacement, seed);
    ASSERT_EQ(inst.m(), 100u);
    std::set<std::pair<std::vector<std::uint32_t>, std::uint32_t>> seen;
    for (const auto& c : inst.constraints) {
      ASSERT_EQ(c.vars.size(), 3u);
      EXPECT_EQ(std::set<std::uint32_t>(c.vars.begin(), c.vars.end()).size(), 3u);
      for (auto v : c.vars) EXPECT_LT(v, 6u);
      EXPECT_LT(c.negated, 8u);
      EXPECT_TRUE(seen.insert({c.vars, c.negated}).second);
    }
  }
  EXPECT_EQ(distinct_constraint_count(6, 3), 8u * 120u);
  EXPECT_THROW(sample_instance(f, 3, 49, SamplingMode::without_replacement, 1), CapacityError);
  EXPECT_NO_THROW(sample_instance(f, 3, 48, SamplingMode::without_replacement, 1));
  EXPECT_THROW(sample_instance(f, 2, 1, SamplingMode::without_replacement, 1), ArgumentError);
}

TEST(Sampling, ArityEqualsNGivesPermutations) {
  const auto f = fn("ksat:4");
  const auto inst = sample_instance(f, 4, 200, SamplingMode::without_replacement, 3);
  for (const auto& c : inst.constraints) {
    auto sorted = c.vars;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<std::uint32_t>{0, 1, 2, 3}));
  }
}

TEST(Sampling, Deterministic) {
  const auto f = fn("naesat:3");
  for (auto mode : {SamplingMode::with_replacement, SamplingMode::without_replacement}) {
    const auto a = sample_instance(f, 20, 50, mode, 42);
    const auto b = sample_instance(f, 20, 50, mode, 42);
    EXPECT_EQ(a.constraints, b.constraints);
    const auto c = sample_instance(f, 20, 50, mode, 43);
    EXPECT_NE(a.constraints, c.constraints);
  }
}

TEST(Sampling, WithReplacementIsUniform) {
  // n = 3, k = 2: 9 index tuples x 4 sign patterns = 36 cells, repeats allowed.
  const auto f = fn("ksat:2");
  const int samples = 36000;
  const auto inst = sample_instance(f, 3, samples, SamplingMode::with_replacement, 8);
  std::map<std::pair<std::vector<std::uint32_t>, std::uint32_t>, int> counts;
  for (const auto& c : inst.constraints) ++counts[{c.vars, c.negated}];
  EXPECT_EQ(counts.size(), 36u);
  const double p = 1.0 / 36.0;
  const double mean = samples * p;
  const double sd = std::sqrt(samples * p * (1 - p));
  for (const auto& [key, count] : counts) EXPECT_NEAR(count, mean, 4 * sd);
}

TEST(Satisfies, Examples) {
  CspInstance inst{4, fn("ksat:3"), {make_constraint({0, 1, 2}, 0)}, SamplingMode::without_replacement};
  EXPECT_FALSE(satisfies(inst, std::vector<int>{-1, -1, -1, 1}));
  EXPECT_TRUE(satisfies(inst, std::vector<int>{-1, 1, -1, -1}));
  // Negating x1 flips which assignment is forbidden.
  inst.constraints[0].negated = 1;
  EXPECT_TRUE(satisfies(inst, std::vector<int>{-1, -1, -1, 1}));
  EXPECT_FALSE(satisfies(inst, std::vector<int>{1, -1, -1, 1}));
  EXPECT_THROW(satisfies(inst, std::vector<int>{1, 1}), ArgumentError);
  EXPECT_EQ(inst.constraints[0].signs(), (std::vector<int>{-1, 1, 1}));
}

TEST(Satisfies, MatchesOracleAndCounts) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = oracle::random_function(1 + static_cast<int>(seed % 4), seed);
    const int n = std::max(f.arity(), 2 + static_cast<int>(seed % 9));
    const auto mode = seed % 2 ? SamplingMode::with_replacement : SamplingMode::without_replacement;
    const auto inst = sample_instance(f, n, 1 + seed % 7, mode, derive_seed(5, seed));
    const auto sols = oracle::solution_set(inst);
    std::uint64_t count = 0;
    for (std::uint64_t b = 0; b < sols.size(); ++b) {
      ASSERT_EQ(satisfies_bits(inst, b), sols[b]);
      ASSERT_EQ(satisfies(inst, oracle::sigma_of(b, n)), sols[b]);
      count += sols[b];
    }
    EXPECT_EQ(count_solutions(inst), count) << "seed " << seed;
    EXPECT_DOUBLE_EQ(weighted_sum(inst, weight_from_function(f)), static_cast<double>(count));
  }
}

TEST(WeightedSum, MatchesDirectProduct) {
  const auto f = fn("ksat:3");
  const auto w = optimal_weight(f);
  const auto inst = sample_instance(f, 8, 6, SamplingMode::with_replacement, 77);
  double expected = 0;
  for (std::uint64_t b = 0; b < 256; ++b) {
    double prod = 1;
    for (const auto& c : inst.constraints) prod *= w.value_real(c.input_index(b));
    expected += prod;
  }
  EXPECT_NEAR(weighted_sum(inst, w), expected, 1e-9 * std::max(1.0, std::abs(expected)));
}

TEST(Cnf, Examples) {
  CspInstance sat{3, fn("ksat:3"), {make_constraint({0, 1, 2}, 0)}, SamplingMode::without_replacement};
  const auto cnf = to_cnf(sat);
  EXPECT_EQ(cnf.num_vars, 3);
  ASSERT_EQ(cnf.clauses.size(), 1u);
  EXPECT_EQ(cnf.clauses[0], (std::vector<int>{1, 2, 3}));
  std::ostringstream os;
  to_dimacs(sat, os);
  EXPECT_EQ(os.str(), "p cnf 3 1\n1 2 3 0\n");

  sat.constraints[0].negated = 0b010;
  EXPECT_EQ(to_cnf(sat).clauses[0], (std::vector<int>{1, -2, 3}));

  CspInstance nae{3, fn("naesat:3"), {make_constraint({0, 1, 2}, 0)}, SamplingMode::without_replacement};
  const auto nae_cnf = to_cnf(nae);
  ASSERT_EQ(nae_cnf.clauses.size(), 2u);
  EXPECT_EQ(nae_cnf.clauses[0], (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(nae_cnf.clauses[1], (std::vector<int>{-1, -2, -3}));
}

TEST(Cnf, RepeatedVariablesMergeOrDrop) {
  // x1 appears twice: the forbidden (-1,-1,*) patterns give clauses with a
  // merged literal, and inconsistent patterns are tautologies.
  CspInstance inst{2, fn("ksat:3"), {make_constraint({0, 0, 1}, 0)}, SamplingMode::with_replacement};
  const auto cnf = to_cnf(inst);
  ASSERT_EQ(cnf.clauses.size(), 1u);
  EXPECT_EQ(cnf.clauses[0], (std::vector<int>{1, 2}));
  inst.constraints[0].negated = 0b001;  // x1 or not x1 or x2: always true
  EXPECT_TRUE(to_cnf(inst).clauses.empty());
}

TEST(Cnf, ModelsMatchSolutionsOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = oracle::random_function(1 + static_cast<int>(seed % 5), derive_seed(9, seed));
    const int n = std::max(f.arity(), 3 + static_cast<int>(seed % 8));
    const auto mode = seed % 3 ? SamplingMode::without_replacement : SamplingMode::with_replacement;
    const auto inst = sample_instance(f, n, 1 + seed % 6, mode, seed);
    EXPECT_EQ(oracle::cnf_models(to_cnf(inst)), oracle::solution_set(inst)) << "seed " << seed;
  }
}

TEST(Solve, BruteAndDpllAgreeWithCount) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto f = oracle::random_function(2 + static_cast<int>(seed % 3), derive_seed(31, seed));
    const int n = 4 + static_cast<int>(seed % 9);
    const auto inst = sample_instance(f, n, 2 + seed % (2 * n), SamplingMode::without_replacement, seed);
    const bool expected = count_solutions(inst) > 0;
    for (auto method : {SolveMethod::brute, SolveMethod::dpll}) {
      const auto res = solve(inst, method);
      EXPECT_EQ(res.satisfiable, expected) << "seed " << seed;
      if (res.satisfiable) EXPECT_TRUE(oracle::satisfies(inst, res.witness));
    }
  }
  EXPECT_EQ(parse_solve_method("brute"), SolveMethod::brute);
  EXPECT_THROW(parse_solve_method("cdcl"), ArgumentError);
}

TEST(Json, Roundtrip) {
  const auto f = fn("tribes:2,2");
  for (auto mode : {SamplingMode::with_replacement, SamplingMode::without_replacement}) {
    const auto inst = sample_instance(f, 9, 30, mode, 4);
    const auto j = instance_to_json(inst);
    EXPECT_EQ(j.at("n"), 9);
    EXPECT_EQ(j.at("fn_spec"), "tribes:2,2");
    for (const auto& c : j.at("constraints")) {
      for (int i : c.at("I")) {
        EXPECT_GE(i, 1);
        EXPECT_LE(i, 9);
      }
      for (int s : c.at("s")) EXPECT_TRUE(s == 1 || s == -1);
    }
    const auto back = instance_from_json(j);
    EXPECT_EQ(back.n, inst.n);
    EXPECT_EQ(back.f, inst.f);
    EXPECT_EQ(back.mode, inst.mode);
    EXPECT_EQ(back.constraints, inst.constraints);
  }
}

TEST(Json, RejectsMalformed) {
  const auto inst = sample_instance(fn("ksat:3"), 5, 3, SamplingMode::without_replacement, 1);
  auto j = instance_to_json(inst);
  j["constraints"][0]["I"][0] = 6;
  EXPECT_THROW(instance_from_json(j), ArgumentError);
  j = instance_to_json(inst);
  j["constraints"][0]["s"][1] = 0;
  EXPECT_THROW(instance_from_json(j), ArgumentError);
  j = instance_to_json(inst);
  j["constraints"][0]["I"] = {1, 1, 2};
  EXPECT_THROW(instance_from_json(j), ArgumentError);
  j = instance_to_json(inst);
  j.erase("n");
  EXPECT_THROW(instance_from_json(j), ArgumentError);
}

TEST(Sweep, ZeroDensityAlwaysSatisfiable) {
  const std::vector<Rational> grid = {Rational(0), Rational(1, 2)};
  const auto res = sweep(fn("ksat:3"), 12, grid, 10, 1, SolveMethod::dpll);
  ASSERT_TRUE(res.complete);
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_EQ(res.rows[0].m, 0u);
  EXPECT_EQ(res.rows[0].frac_sat, 1.0);
  EXPECT_EQ(res.rows[1].m, 6u);
}

TEST(Sweep, DeterministicOutput) {
  const auto grid = density_grid(Rational(1), Rational(3), Rational(1, 2));
  ASSERT_EQ(grid.size(), 5u);
  std::ostringstream a, b;
  write_sweep_rows(sweep(fn("naesat:3"), 16, grid, 20, 5, SolveMethod::dpll), a);
  write_sweep_rows(sweep(fn("naesat:3"), 16, grid, 20, 5, SolveMethod::dpll), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), kSweepCsvHeader);
  // Brute force visits the same instances, so it reaches the same counts.
  const auto brute = sweep(fn("naesat:3"), 16, grid, 20, 5, SolveMethod::brute);
  const auto dpll = sweep(fn("naesat:3"), 16, grid, 20, 5, SolveMethod::dpll);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(brute.rows[i].sat_count, dpll.rows[i].sat_count);
}

TEST(Sweep, Density) {
  EXPECT_EQ(constraints_for_density(Rational(1, 4), 10), 3u);  // 2.5 rounds up
  EXPECT_EQ(constraints_for_density(Rational(0), 10), 0u);
  EXPECT_THROW(density_grid(Rational(1), Rational(0), Rational(1, 4)), ArgumentError);
  EXPECT_THROW(density_grid(Rational(0), Rational(1), Rational(0)), ArgumentError);
}
