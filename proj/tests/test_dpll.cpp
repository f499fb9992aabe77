#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <vector>

#include "fbounds/csp.hpp"
#include "fbounds/dpll.hpp"
#include "fbounds/parse.hpp"
#include "oracles.hpp"

using namespace fbounds;

namespace {

bool model_satisfies(const Cnf& cnf, const std::vector<bool>& model) {
  if (static_cast<int>(model.size()) != cnf.num_vars + 1) return false;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) sat |= model[std::abs(lit)] == (lit > 0);
    if (!sat) return false;
  }
  return true;
}

bool any_model(const Cnf& cnf) {
  for (bool b : oracle::cnf_models(cnf))
    if (b) return true;
  return false;
}

// Shifts every variable up by `offset` so the solver sees more than 64 variables.
Cnf padded(const Cnf& cnf, int offset) {
  Cnf out;
  out.num_vars = cnf.num_vars + offset;
  for (const auto& clause : cnf.clauses) {
    std::vector<int> c;
    for (int lit : clause) c.push_back(lit > 0 ? lit + offset : lit - offset);
    out.clauses.push_back(c);
  }
  return out;
}

}  // namespace

TEST(Dpll, SmallFormulas) {
  EXPECT_TRUE(solve_dpll(Cnf{0, {}}).has_value());
  EXPECT_FALSE(solve_dpll(Cnf{1, {{1}, {-1}}}).has_value());
  EXPECT_FALSE(solve_dpll(Cnf{1, {{}}}).has_value());
  const Cnf cnf{3, {{1, 2}, {-1, 3}, {-3}}};
  const auto model = solve_dpll(cnf);
  ASSERT_TRUE(model.has_value());
  EXPECT_TRUE(model_satisfies(cnf, *model));
  // All eight clauses over three variables: unsatisfiable.
  Cnf full{3, {}};
  for (int m = 0; m < 8; ++m) full.clauses.push_back({m & 1 ? 1 : -1, m & 2 ? 2 : -2, m & 4 ? 3 : -3});
  EXPECT_FALSE(solve_dpll(full).has_value());
  EXPECT_FALSE(solve_dpll(padded(full, 70)).has_value());
}

TEST(Dpll, AgreesWithEnumerationOnRandomInstances) {
  int sat = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int k = 2 + static_cast<int>(seed % 3);
    const auto f = oracle::random_function(k, derive_seed(41, seed));
    const int n = 4 + static_cast<int>(seed % 13);
    const auto inst = sample_instance(f, n, 1 + seed % (3 * n), SamplingMode::without_replacement, seed);
    const Cnf cnf = to_cnf(inst);
    const bool expected = any_model(cnf);
    sat += expected;
    for (const Cnf& c : {cnf, padded(cnf, 61)}) {
      DpllStats stats;
      const auto model = solve_dpll(c, &stats);
      ASSERT_EQ(model.has_value(), expected) << "seed " << seed << " vars " << c.num_vars;
      if (model) EXPECT_TRUE(model_satisfies(c, *model)) << "seed " << seed;
    }
  }
  // Both outcomes must be exercised.
  EXPECT_GT(sat, 50);
  EXPECT_LT(sat, 450);
}

TEST(Dpll, Dimacs) {
  std::ostringstream os;
  write_dimacs(Cnf{2, {{1, -2}, {2}}}, os);
  EXPECT_EQ(os.str(), "p cnf 2 2\n1 -2 0\n2 0\n");
}
