#include "fbounds/sweep.hpp"

#include <chrono>
#include <ostream>

#include "fbounds/errors.hpp"
#include "fbounds/parallel.hpp"
#include "fbounds/rng.hpp"

namespace fbounds {

std::uint64_t constraints_for_density(const Rational& r, int n) {
  if (r < 0) throw ArgumentError("density must be non-negative");
  const Integer m = round_half_up(r * n);
  if (!m.fits_ulong_p()) throw CapacityError("constraint count too large");
  return m.get_ui();
}

std::vector<Rational> density_grid(const Rational& r_min, const Rational& r_max, const Rational& step) {
  if (step <= 0) throw ArgumentError("grid step must be positive");
  if (r_min < 0) throw ArgumentError("grid start must be non-negative");
  if (r_max < r_min) throw ArgumentError("grid end lies below its start");
  std::vector<Rational> out;
  for (Rational r = r_min; r <= r_max; r += step) out.push_back(r);
  return out;
}

SweepResult sweep(const BooleanFunction& f, int n, std::span<const Rational> r_grid, int trials,
                  std::uint64_t seed, SolveMethod method, const SweepOptions& options) {
  if (r_grid.empty()) throw ArgumentError("density grid is empty");
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (f.arity() > options.max_arity)
    throw CapacityError("sweeps are limited to arity " + std::to_string(options.max_arity));
  if (n < f.arity()) throw ArgumentError("need n >= k");
  SweepResult result;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    SweepRow row;
    row.r = r_grid[i];
    row.trials = trials;
    std::vector<char> sat(static_cast<std::size_t>(trials), 0);
    std::vector<double> seconds(static_cast<std::size_t>(trials), 0.0);
    try {
      row.m = constraints_for_density(row.r, n);
      parallel_for(sat.size(), [&](std::size_t t) {
        const CspInstance inst = sample_instance(f, n, row.m, options.mode, derive_seed(seed, i, t));
        const auto start = std::chrono::steady_clock::now();
        sat[t] = solve(inst, method).satisfiable ? 1 : 0;
        if (options.measure_time)
          seconds[t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      });
    } catch (const std::exception& e) {
      result.complete = false;
      result.error = e.what();
      return result;
    }
    double total_time = 0.0;
    for (std::size_t t = 0; t < sat.size(); ++t) {
      row.sat_count += sat[t];
      total_time += seconds[t];
    }
    row.frac_sat = static_cast<double>(row.sat_count) / trials;
    row.mean_solve_time = total_time / trials;
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_rows(const SweepResult& result, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : result.rows)
    out << to_string(row.r) << ',' << row.m << ',' << row.trials << ',' << row.sat_count << ','
        << format_real(row.frac_sat) << ',' << format_real(row.mean_solve_time) << '\n';
}

}  // namespace fbounds
