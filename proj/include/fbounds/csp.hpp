#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fbounds/boolfn.hpp"
#include "fbounds/dpll.hpp"

namespace fbounds {

enum class SamplingMode {
  with_replacement,     ///< index tuples uniform over [n]^k, duplicates allowed
  without_replacement,  ///< distinct indices per constraint, no repeated (I, s) pair
};

std::string to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

/// f_{I,s}: applies f to (s_1 sigma_{i_1}, ..., s_k sigma_{i_k}).
struct Constraint {
  std::vector<std::uint32_t> vars;  ///< I, 0-based
  std::uint32_t negated = 0;        ///< bit j set <=> s_{j+1} = -1

  std::vector<int> signs() const;
  /// Table index of sigma_{I,s} for an assignment packed as bits (bit i <=> sigma_{i+1} = +1).
  std::uint64_t input_index(std::uint64_t sigma_bits) const {
    std::uint64_t u = 0;
    for (std::size_t j = 0; j < vars.size(); ++j)
      u |= (((sigma_bits >> vars[j]) ^ (negated >> j)) & 1) << j;
    return u;
  }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct CspInstance {
  int n = 0;
  BooleanFunction f;
  std::vector<Constraint> constraints;
  SamplingMode mode = SamplingMode::without_replacement;

  std::size_t m() const { return constraints.size(); }
};

/// Largest n for exhaustive enumeration (count_solutions, weighted_sum, brute solve).
inline constexpr int kEnumerationLimit = 30;

/// Uniform sample under `mode`; deterministic in `seed`. Requires n >= k.
/// Throws CapacityError when m exceeds the number of distinct constraints.
CspInstance sample_instance(const BooleanFunction& f, int n, std::size_t m, SamplingMode mode,
                            std::uint64_t seed);

/// Number of distinct (I, s) pairs available without replacement (saturates at UINT64_MAX).
std::uint64_t distinct_constraint_count(int n, int k);

bool satisfies(const CspInstance& inst, std::span<const int> sigma);
bool satisfies_bits(const CspInstance& inst, std::uint64_t sigma_bits);

std::uint64_t count_solutions(const CspInstance& inst);
/// X = sum over sigma of prod_j w(sigma_{I_j,s_j}).
double weighted_sum(const CspInstance& inst, const WeightFunction& w);

/// One clause per constraint and forbidden input u: the literal on i_j is
/// positive iff s_j u_j = -1. Repeated literals are merged and tautologies dropped.
Cnf to_cnf(const CspInstance& inst);
void to_dimacs(const CspInstance& inst, std::ostream& out);

enum class SolveMethod { brute, dpll };
std::string to_string(SolveMethod method);
SolveMethod parse_solve_method(std::string_view text);

struct SolveResult {
  bool satisfiable = false;
  std::vector<int> witness;  ///< sign vector of length n when satisfiable
};

SolveResult solve(const CspInstance& inst, SolveMethod method);

/// {n, fn_spec, mode, constraints: [{I: [1-based...], s: [+-1...]}]}
nlohmann::json instance_to_json(const CspInstance& inst);
CspInstance instance_from_json(const nlohmann::json& j, int arity_cap = kDefaultArityCap);

}  // namespace fbounds
