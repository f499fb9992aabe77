#include "fbounds/csp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

#include "fbounds/errors.hpp"
#include "fbounds/parse.hpp"
#include "fbounds/rng.hpp"

namespace fbounds {
namespace {

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

void check_enumerable(const CspInstance& inst) {
  if (inst.n > kEnumerationLimit)
    throw CapacityError("n = " + std::to_string(inst.n) + " exceeds the enumeration limit of " +
                        std::to_string(kEnumerationLimit));
}

// Evaluates all constraints on 64 assignments at once: lane b of block h is
// the assignment with bits (h << 6) | b.
class BlockEvaluator {
 public:
  explicit BlockEvaluator(const CspInstance& inst) : inst_(inst) {
    const BooleanFunction& f = inst.f;
    const std::uint64_t sols = f.popcount();
    complement_ = sols > f.size() / 2;
    for (std::uint64_t u = 0; u < f.size(); ++u)
      if (f[u] != complement_) minterms_.push_back(u);
    per_lane_ = minterms_.size() > 64;
  }

  std::uint64_t blocks() const { return inst_.n <= 6 ? 1 : std::uint64_t{1} << (inst_.n - 6); }

  std::uint64_t satisfied(std::uint64_t block) const {
    std::uint64_t alive = inst_.n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1u << inst_.n)) - 1;
    const int k = inst_.f.arity();
    std::uint64_t x[32];
    for (const Constraint& c : inst_.constraints) {
      if (!alive) break;
      for (int j = 0; j < k; ++j) {
        const std::uint32_t v = c.vars[j];
        std::uint64_t word = v < 6 ? kLanePattern[v] : (((block >> (v - 6)) & 1) ? ~std::uint64_t{0} : 0);
        if ((c.negated >> j) & 1) word = ~word;
        x[j] = word;
      }
      std::uint64_t sat = 0;
      if (per_lane_) {
        for (std::uint64_t lanes = alive; lanes; lanes &= lanes - 1) {
          const int b = __builtin_ctzll(lanes);
          std::uint64_t u = 0;
          for (int j = 0; j < k; ++j) u |= ((x[j] >> b) & 1) << j;
          if (inst_.f[u]) sat |= std::uint64_t{1} << b;
        }
      } else {
        for (std::uint64_t u : minterms_) {
          std::uint64_t term = ~std::uint64_t{0};
          for (int j = 0; j < k && term; ++j) term &= ((u >> j) & 1) ? x[j] : ~x[j];
          sat |= term;
        }
        if (complement_) sat = ~sat;
      }
      alive &= sat;
    }
    return alive;
  }

 private:
  const CspInstance& inst_;
  bool complement_ = false;
  bool per_lane_ = false;
  std::vector<std::uint64_t> minterms_;
};

std::uint64_t pack_sigma(const CspInstance& inst, std::span<const int> sigma) {
  if (sigma.size() != static_cast<std::size_t>(inst.n))
    throw ArgumentError("assignment has length " + std::to_string(sigma.size()) + ", expected " +
                        std::to_string(inst.n));
  if (inst.n > 64) throw CapacityError("packed assignments need n <= 64");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] != 1 && sigma[i] != -1) throw ArgumentError("assignment entries must be +1 or -1");
    if (sigma[i] == 1) bits |= std::uint64_t{1} << i;
  }
  return bits;
}

std::vector<int> unpack_sigma(std::uint64_t bits, int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = ((bits >> i) & 1) ? 1 : -1;
  return out;
}

}  // namespace

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::with_replacement ? "with_replacement" : "without_replacement";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "with_replacement" || text == "with") return SamplingMode::with_replacement;
  if (text == "without_replacement" || text == "without") return SamplingMode::without_replacement;
  throw ArgumentError("sampling mode must be with_replacement or without_replacement, got '" +
                      std::string(text) + "'");
}

std::vector<int> Constraint::signs() const {
  std::vector<int> out(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) out[j] = ((negated >> j) & 1) ? -1 : 1;
  return out;
}

std::uint64_t distinct_constraint_count(int n, int k) {
  if (k > n) return 0;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = std::uint64_t{1} << k;
  for (int j = 0; j < k; ++j) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n - j);
    if (count > kMax / factor) return kMax;
    count *= factor;
  }
  return count;
}

CspInstance sample_instance(const BooleanFunction& f, int n, std::size_t m, SamplingMode mode,
                            std::uint64_t seed) {
  const int k = f.arity();
  if (n < k) throw ArgumentError("need n >= k (n = " + std::to_string(n) + ", k = " + std::to_string(k) + ")");
  if (mode == SamplingMode::without_replacement && m > distinct_constraint_count(n, k))
    throw CapacityError("m = " + std::to_string(m) + " exceeds the " +
                        std::to_string(distinct_constraint_count(n, k)) + " distinct constraints");
  CspInstance inst{n, f, {}, mode};
  inst.constraints.reserve(m);
  Rng rng(seed);
  std::set<std::pair<std::vector<std::uint32_t>, std::uint32_t>> seen;
  while (inst.constraints.size() < m) {
    Constraint c;
    c.vars.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      std::uint32_t v;
      do {
        v = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(n)));
      } while (mode == SamplingMode::without_replacement &&
               std::find(c.vars.begin(), c.vars.end(), v) != c.vars.end());
      c.vars.push_back(v);
    }
    c.negated = static_cast<std::uint32_t>(rng.bits(k));
    if (mode == SamplingMode::without_replacement && !seen.emplace(c.vars, c.negated).second) continue;
    inst.constraints.push_back(std::move(c));
  }
  return inst;
}

bool satisfies_bits(const CspInstance& inst, std::uint64_t sigma_bits) {
  for (const Constraint& c : inst.constraints)
    if (!inst.f[c.input_index(sigma_bits)]) return false;
  return true;
}

bool satisfies(const CspInstance& inst, std::span<const int> sigma) {
  return satisfies_bits(inst, pack_sigma(inst, sigma));
}

std::uint64_t count_solutions(const CspInstance& inst) {
  check_enumerable(inst);
  const BlockEvaluator eval(inst);
  std::uint64_t total = 0;
  for (std::uint64_t b = 0; b < eval.blocks(); ++b) total += static_cast<std::uint64_t>(__builtin_popcountll(eval.satisfied(b)));
  return total;
}

double weighted_sum(const CspInstance& inst, const WeightFunction& w) {
  check_enumerable(inst);
  if (w.arity != inst.f.arity()) throw ArgumentError("weight arity differs from the constraint arity");
  std::vector<double> table(w.values.size());
  for (std::size_t u = 0; u < table.size(); ++u) table[u] = w.value_real(u);
  const std::uint64_t total = std::uint64_t{1} << inst.n;
  long double sum = 0;
  for (std::uint64_t sigma = 0; sigma < total; ++sigma) {
    double prod = 1.0;
    for (const Constraint& c : inst.constraints) {
      prod *= table[c.input_index(sigma)];
      if (prod == 0.0) break;
    }
    sum += prod;
  }
  return static_cast<double>(sum);
}

Cnf to_cnf(const CspInstance& inst) {
  Cnf cnf;
  cnf.num_vars = inst.n;
  const BooleanFunction& f = inst.f;
  const int k = f.arity();
  std::vector<std::uint64_t> forbidden;
  for (std::uint64_t u = 0; u < f.size(); ++u)
    if (!f[u]) forbidden.push_back(u);
  for (const Constraint& c : inst.constraints) {
    for (std::uint64_t u : forbidden) {
      std::vector<int> clause;
      bool tautology = false;
      for (int j = 0; j < k && !tautology; ++j) {
        const int var = static_cast<int>(c.vars[j]) + 1;
        // s_j u_j = -1 exactly when the u bit and the negation bit agree.
        const bool positive = ((u >> j) & 1) == ((c.negated >> j) & 1);
        const int lit = positive ? var : -var;
        if (std::find(clause.begin(), clause.end(), -lit) != clause.end())
          tautology = true;
        else if (std::find(clause.begin(), clause.end(), lit) == clause.end())
          clause.push_back(lit);
      }
      if (!tautology) cnf.clauses.push_back(std::move(clause));
    }
  }
  return cnf;
}

void to_dimacs(const CspInstance& inst, std::ostream& out) { write_dimacs(to_cnf(inst), out); }

std::string to_string(SolveMethod method) { return method == SolveMethod::brute ? "brute" : "dpll"; }

SolveMethod parse_solve_method(std::string_view text) {
  if (text == "brute") return SolveMethod::brute;
  if (text == "dpll") return SolveMethod::dpll;
  throw ArgumentError("solve method must be brute or dpll, got '" + std::string(text) + "'");
}

SolveResult solve(const CspInstance& inst, SolveMethod method) {
  SolveResult out;
  if (method == SolveMethod::brute) {
    check_enumerable(inst);
    const BlockEvaluator eval(inst);
    for (std::uint64_t b = 0; b < eval.blocks(); ++b) {
      const std::uint64_t lanes = eval.satisfied(b);
      if (lanes) {
        out.satisfiable = true;
        out.witness = unpack_sigma((b << 6) | static_cast<std::uint64_t>(__builtin_ctzll(lanes)), inst.n);
        break;
      }
    }
  } else {
    const auto model = solve_dpll(to_cnf(inst));
    if (model) {
      out.satisfiable = true;
      out.witness.resize(static_cast<std::size_t>(inst.n));
      for (int i = 0; i < inst.n; ++i) out.witness[i] = (*model)[i + 1] ? 1 : -1;
    }
  }
  if (out.satisfiable && !satisfies(inst, out.witness))
    throw std::logic_error("solver returned an assignment that violates a constraint");
  return out;
}

nlohmann::json instance_to_json(const CspInstance& inst) {
  nlohmann::json constraints = nlohmann::json::array();
  for (const Constraint& c : inst.constraints) {
    nlohmann::json idx = nlohmann::json::array();
    for (std::uint32_t v : c.vars) idx.push_back(v + 1);
    constraints.push_back({{"I", idx}, {"s", c.signs()}});
  }
  return {{"n", inst.n}, {"fn_spec", inst.f.name()}, {"mode", to_string(inst.mode)}, {"constraints", constraints}};
}

CspInstance instance_from_json(const nlohmann::json& j, int arity_cap) {
  try {
    CspInstance inst{j.at("n").get<int>(), parse_function(j.at("fn_spec").get<std::string>(), arity_cap), {},
                     parse_sampling_mode(j.at("mode").get<std::string>())};
    if (inst.n < inst.f.arity()) throw ArgumentError("instance has n < k");
    const auto k = static_cast<std::size_t>(inst.f.arity());
    std::set<std::pair<std::vector<std::uint32_t>, std::uint32_t>> seen;
    for (const auto& item : j.at("constraints")) {
      const auto idx = item.at("I").get<std::vector<long long>>();
      const auto s = item.at("s").get<std::vector<int>>();
      if (idx.size() != k || s.size() != k) throw ArgumentError("constraint tuple length differs from k");
      Constraint c;
      for (std::size_t t = 0; t < k; ++t) {
        if (idx[t] < 1 || idx[t] > inst.n) throw ArgumentError("constraint index out of range 1..n");
        if (s[t] != 1 && s[t] != -1) throw ArgumentError("constraint signs must be +1 or -1");
        c.vars.push_back(static_cast<std::uint32_t>(idx[t] - 1));
        if (s[t] == -1) c.negated |= 1u << t;
      }
      if (inst.mode == SamplingMode::without_replacement) {
        auto sorted = c.vars;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
          throw ArgumentError("repeated index inside a without-replacement constraint");
        if (!seen.emplace(c.vars, c.negated).second)
          throw ArgumentError("duplicate constraint in a without-replacement instance");
      }
      inst.constraints.push_back(std::move(c));
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed instance JSON: ") + e.what());
  }
}

}  // namespace fbounds
