#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fbounds {

/// CNF over variables 1..num_vars; literal v > 0 is "x_v true", -v its negation.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

/// DIMACS: "p cnf <vars> <clauses>" then one "l1 l2 ... 0" line per clause.
void write_dimacs(const Cnf& cnf, std::ostream& out);

struct DpllStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
};

/// Complete DPLL search: unit propagation, pure-literal elimination and
/// most-occurrences branching. Returns a model (index v holds x_v, index 0
/// unused) or nullopt when unsatisfiable.
std::optional<std::vector<bool>> solve_dpll(const Cnf& cnf, DpllStats* stats = nullptr);

}  // namespace fbounds
