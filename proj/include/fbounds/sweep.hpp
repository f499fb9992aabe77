#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fbounds/csp.hpp"
#include "fbounds/rational.hpp"

namespace fbounds {

struct SweepRow {
  Rational r;
  std::uint64_t m = 0;
  int trials = 0;
  int sat_count = 0;
  double frac_sat = 0.0;
  double mean_solve_time = 0.0;  ///< seconds; 0 unless timing was requested
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool complete = true;  ///< false when an error stopped the sweep; rows hold what finished
  std::string error;
};

struct SweepOptions {
  SamplingMode mode = SamplingMode::without_replacement;
  /// Wall-clock timing makes output run-dependent, so it is opt-in.
  bool measure_time = false;
  /// Direct CNF expansion emits up to 2^k clauses per constraint.
  int max_arity = 12;
};

/// m = round(r n) ties up, for every density in the code base.
std::uint64_t constraints_for_density(const Rational& r, int n);

/// r_min, r_min + step, ... up to r_max inclusive.
std::vector<Rational> density_grid(const Rational& r_min, const Rational& r_max, const Rational& step);

/// Trial t at grid point i uses seed derive_seed(seed, i, t); rows follow grid order.
SweepResult sweep(const BooleanFunction& f, int n, std::span<const Rational> r_grid, int trials,
                  std::uint64_t seed, SolveMethod method, const SweepOptions& options = {});

inline constexpr const char* kSweepCsvHeader = "r,m,trials,sat_count,frac_sat,mean_solve_time_s";
/// Header line, then one row per grid point.
void write_sweep_rows(const SweepResult& result, std::ostream& out);

}  // namespace fbounds
