#include "fbounds/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbounds/bounds.hpp"
#include "fbounds/csp.hpp"
#include "fbounds/errors.hpp"
#include "fbounds/moments.hpp"
#include "fbounds/parse.hpp"
#include "fbounds/sweep.hpp"

namespace fbounds {
namespace {

using nlohmann::json;

struct Options {
  std::string fn;
  int arity_cap = kDefaultArityCap;
  std::string format = "json";
  std::uint64_t seed = 1;
  // bounds
  bool weight_table = false;
  // curve
  std::string kind = "gw";
  std::string weight = "f";
  std::string r;
  int n_min = 10;
  int n_max = 200;
  int n_step = 10;
  int alpha_steps = 100;
  // moments / gen
  int n = 0;
  std::uint64_t m = 0;
  std::uint64_t mc = 0;
  bool exhaustive = false;
  std::string mode = "without_replacement";
  std::string dimacs;
  // sweep
  std::string r_min = "0";
  std::string r_max = "3";
  std::string r_step = "1/4";
  int trials = 50;
  std::string method = "dpll";
  bool timing = false;
};

json real_json(double x) {
  if (std::isfinite(x)) return std::stod(format_real(x));
  return format_real(x);
}

std::string subset_string(std::uint64_t mask) {
  if (mask == 0) return "∅";
  std::string out = "{";
  for (int j = 0; mask >> j; ++j) {
    if (!((mask >> j) & 1)) continue;
    if (out.size() > 1) out += ',';
    out += std::to_string(j + 1);
  }
  return out + "}";
}

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : '"' + s + '"';
}

json meta_json(const CLI::App& sub, const Options& opt, bool seeded) {
  json flags = json::object();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_lnames().empty() || o->get_lnames().front() == "help") continue;
    const std::string& name = o->get_lnames().front();
    if (o->get_expected_min() == 0) {
      flags[name] = o->count() > 0;
    } else if (o->count() > 0) {
      std::string joined;
      for (const auto& v : o->results()) joined += (joined.empty() ? "" : ",") + v;
      flags[name] = joined;
    } else {
      flags[name] = o->get_default_str();
    }
  }
  return {{"version", FBOUNDS_VERSION},
          {"command", sub.get_name()},
          {"fn_spec", opt.fn},
          {"seed", seeded ? json(opt.seed) : json(nullptr)},
          {"flags", flags}};
}

void write_csv_meta(std::ostream& out, const json& meta) { out << "# meta " << meta.dump() << '\n'; }

int cmd_fourier(const CLI::App& sub, const Options& opt, std::ostream& out) {
  const BooleanFunction f = parse_function(opt.fn, opt.arity_cap);
  const FourierSpectrum spec = transform(f);
  const json meta = meta_json(sub, opt, false);
  if (opt.format == "csv") {
    write_csv_meta(out, meta);
    out << "mask,subset,coefficient\n";
    for (std::uint64_t s = 0; s < spec.coeffs.size(); ++s)
      out << s << ',' << csv_field(subset_string(s)) << ',' << to_string(spec[s]) << '\n';
    return kExitOk;
  }
  json rows = json::array();
  for (std::uint64_t s = 0; s < spec.coeffs.size(); ++s)
    rows.push_back({{"mask", s}, {"subset", subset_string(s)}, {"coefficient", to_string(spec[s])}});
  out << json{{"meta", meta}, {"arity", f.arity()}, {"coefficients", rows}}.dump(2) << '\n';
  return kExitOk;
}

int cmd_bounds(const CLI::App& sub, const Options& opt, std::ostream& out, std::ostream& err) {
  const BooleanFunction f = parse_function(opt.fn, opt.arity_cap);
  const ThresholdBounds b = threshold_bounds(f);
  json warnings = json::array();
  if (b.always_satisfiable) warnings.push_back("constant-one function: every instance is satisfiable");
  if (!b.always_satisfiable && !b.symmetrizable())
    warnings.push_back("no symmetrizable weight: c = 0, so the second-moment bound is r_low = 0");
  json result = {
      {"meta", meta_json(sub, opt, false)},
      {"arity", b.arity},
      {"solution_count", b.solution_count},
      {"rank", b.rank},
      {"f_hat_empty", to_string(b.f_hat_empty)},
      {"q", to_string(b.q)},
      {"c", to_string(b.c)},
      {"r_low", b.r_low ? json(to_string(*b.r_low)) : json(nullptr)},
      {"r_low_real", real_json(b.r_low_real)},
      {"r_up", real_json(b.r_up)},
      {"r_max", real_json(b.r_max)},
      {"always_satisfiable", b.always_satisfiable},
      {"symmetrizable", b.symmetrizable()},
      {"warnings", warnings},
  };
  for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << '\n';
  if (opt.weight_table) {
    const WeightFunction w = optimal_weight(f);
    json values = json::array();
    for (std::uint64_t u = 0; u < w.values.size(); ++u) {
      if (w.values[u] == 0) continue;
      values.push_back({{"index", u}, {"u", assignment_of(u, w.arity)}, {"value", w.value(u).str()},
                        {"value_real", real_json(w.value_real(u))}});
    }
    result["weight_table"] = {{"scale_sq", to_string(w.scale_sq)}, {"values", values}};
  }
  if (opt.format == "csv") {
    write_csv_meta(out, result["meta"]);
    out << "key,value\n";
    for (const char* key : {"arity", "solution_count", "rank", "f_hat_empty", "q", "c", "r_low", "r_low_real",
                            "r_up", "r_max", "always_satisfiable", "symmetrizable"}) {
      const json& v = result[key];
      out << key << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return kExitOk;
  }
  out << result.dump(2) << '\n';
  return kExitOk;
}

int cmd_curve(const CLI::App& sub, const Options& opt, std::ostream& out) {
  const BooleanFunction f = parse_function(opt.fn, opt.arity_cap);
  const WeightChoice choice = parse_weight_choice(opt.weight);
  const json meta = meta_json(sub, opt, false);
  if (opt.kind == "ratio") {
    if (opt.r.empty()) throw ArgumentError("ratio curve needs --r");
    if (opt.n_step < 1 || opt.n_min > opt.n_max) throw ArgumentError("invalid n range");
    std::vector<int> ns;
    for (int n = opt.n_min; n <= opt.n_max; n += opt.n_step) ns.push_back(n);
    const auto points = ratio_curve(f, choice, parse_rational(opt.r), ns);
    write_csv_meta(out, meta);
    out << "n,m,ratio,log_ratio\n";
    for (const auto& p : points)
      out << p.n << ',' << p.m << ',' << format_real(p.ratio) << ',' << format_real(static_cast<double>(p.log_ratio))
          << '\n';
    return kExitOk;
  }
  const CurveKind kind = parse_curve_kind(opt.kind);
  std::optional<double> r;
  if (!opt.r.empty()) r = parse_rational(opt.r).get_d();
  const auto points = curve_emit(kind, f, choice, r, alpha_grid(opt.alpha_steps));
  write_csv_meta(out, meta);
  out << "alpha," << (kind == CurveKind::gw ? "gw" : "psi") << '\n';
  for (const auto& p : points) out << format_real(p.alpha) << ',' << format_real(p.value) << '\n';
  return kExitOk;
}

int cmd_moments(const CLI::App& sub, const Options& opt, std::ostream& out) {
  const BooleanFunction f = parse_function(opt.fn, opt.arity_cap);
  const WeightFunction w = choose_weight(f, parse_weight_choice(opt.weight));
  const MomentReport rep = moment_report(w, opt.n, opt.m);
  json result = {
      {"meta", meta_json(sub, opt, opt.mc > 0)},
      {"n", rep.n},
      {"m", rep.m},
      {"first_moment", rep.first_moment ? json(rep.first_moment->str()) : json(nullptr)},
      {"second_moment", rep.second_moment ? json(to_string(*rep.second_moment)) : json(nullptr)},
      {"log_first_moment", real_json(static_cast<double>(rep.log_first_moment))},
      {"log_second_moment", real_json(static_cast<double>(rep.log_second_moment))},
      {"ratio", real_json(rep.ratio)},
  };
  if (opt.exhaustive) {
    const ExactMoments ex = exhaustive_moments(f, w, opt.n, opt.m);
    result["exhaustive"] = {{"first_moment", ex.first.str()},
                            {"second_moment", to_string(ex.second)},
                            {"matches_formula", rep.first_moment && ex.first == *rep.first_moment &&
                                                    ex.second == *rep.second_moment}};
  }
  if (opt.mc > 0) {
    const McMoments mc = mc_moments(f, w, opt.n, opt.m, opt.mc, opt.seed);
    result["monte_carlo"] = {{"trials", mc.trials},
                             {"mean_x", real_json(mc.mean_x)},
                             {"mean_x2", real_json(mc.mean_x2)},
                             {"stderr_x", real_json(mc.stderr_x)},
                             {"stderr_x2", real_json(mc.stderr_x2)}};
  }
  out << result.dump(2) << '\n';
  return kExitOk;
}

int cmd_gen(const CLI::App& sub, const Options& opt, std::ostream& out) {
  const BooleanFunction f = parse_function(opt.fn, opt.arity_cap);
  const CspInstance inst = sample_instance(f, opt.n, opt.m, parse_sampling_mode(opt.mode), opt.seed);
  if (!opt.dimacs.empty()) {
    std::ofstream file(opt.dimacs, std::ios::binary);
    if (!file) throw ArgumentError("cannot open DIMACS output '" + opt.dimacs + "'");
    to_dimacs(inst, file);
    if (!file) throw ArgumentError("failed writing DIMACS output '" + opt.dimacs + "'");
  }
  json result = instance_to_json(inst);
  result["meta"] = meta_json(sub, opt, true);
  out << result.dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const CLI::App& sub, const Options& opt, std::ostream& out, std::ostream& err) {
  const BooleanFunction f = parse_function(opt.fn, opt.arity_cap);
  const ThresholdBounds b = threshold_bounds(f);
  const auto grid = density_grid(parse_rational(opt.r_min), parse_rational(opt.r_max), parse_rational(opt.r_step));
  SweepOptions so;
  so.mode = parse_sampling_mode(opt.mode);
  so.measure_time = opt.timing;
  const SweepResult result = sweep(f, opt.n, grid, opt.trials, opt.seed, parse_solve_method(opt.method), so);
  write_csv_meta(out, meta_json(sub, opt, true));
  out << "# r_low=" << (b.r_low ? to_string(*b.r_low) : std::string("inf")) << " (" << format_real(b.r_low_real)
      << ")\n";
  out << "# r_up=" << format_real(b.r_up) << '\n';
  out << "# r_max=" << format_real(b.r_max) << '\n';
  write_sweep_rows(result, out);
  if (!result.complete) {
    out << "# incomplete: " << result.error << '\n';
    err << "error: sweep stopped early: " << result.error << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

void add_fn(CLI::App* sub, Options& opt) {
  sub->add_option("--fn", opt.fn, "constraint function spec, e.g. ksat:3, tribes:2,4, and(x1,x2)")->required();
  sub->add_option("--arity-cap", opt.arity_cap, "largest accepted arity")->check(CLI::Range(1, 32));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-analytic satisfiability threshold bounds for random CSPs", "fbounds"};
  app.set_version_flag("--version", FBOUNDS_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Options opt;

  auto* fourier = app.add_subcommand("fourier", "exact Fourier spectrum of f");
  add_fn(fourier, opt);
  fourier->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));

  auto* bounds = app.add_subcommand("bounds", "c, r_low, r_up, r_max and the optimal weight");
  add_fn(bounds, opt);
  bounds->add_flag("--weight-table", opt.weight_table, "include the optimal weight table");
  bounds->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));

  auto* curve = app.add_subcommand("curve", "g_w, psi_r or second-moment ratio series as CSV");
  add_fn(curve, opt);
  curve->add_option("--kind", opt.kind)->check(CLI::IsMember({"gw", "psi", "ratio"}));
  curve->add_option("--weight", opt.weight)->check(CLI::IsMember({"f", "optimal"}));
  curve->add_option("--r", opt.r, "constraint density (rational or decimal)");
  curve->add_option("--alpha-steps", opt.alpha_steps)->check(CLI::PositiveNumber);
  curve->add_option("--n-min", opt.n_min)->check(CLI::Range(2, 1 << 20));
  curve->add_option("--n-max", opt.n_max)->check(CLI::Range(2, 1 << 20));
  curve->add_option("--n-step", opt.n_step)->check(CLI::PositiveNumber);

  auto* moments = app.add_subcommand("moments", "exact first and second moments of X");
  add_fn(moments, opt);
  moments->add_option("--n", opt.n)->required()->check(CLI::Range(1, 1 << 20));
  moments->add_option("--m", opt.m)->required();
  moments->add_option("--weight", opt.weight)->check(CLI::IsMember({"f", "optimal"}));
  moments->add_option("--mc", opt.mc, "Monte Carlo trials (0 = off)");
  moments->add_flag("--exhaustive", opt.exhaustive, "cross-check by full enumeration");
  moments->add_option("--seed", opt.seed);

  auto* gen = app.add_subcommand("gen", "sample a random instance as JSON");
  add_fn(gen, opt);
  gen->add_option("--n", opt.n)->required()->check(CLI::Range(1, 1 << 20));
  gen->add_option("--m", opt.m)->required();
  gen->add_option("--mode", opt.mode)->check(CLI::IsMember({"with_replacement", "without_replacement"}));
  gen->add_option("--seed", opt.seed);
  gen->add_option("--dimacs", opt.dimacs, "also write the CNF encoding to this path");

  auto* sweep_cmd = app.add_subcommand("sweep", "fraction of satisfiable instances across densities");
  add_fn(sweep_cmd, opt);
  opt.n = 40;
  sweep_cmd->add_option("--n", opt.n)->check(CLI::Range(1, 1 << 20));
  sweep_cmd->add_option("--r-min", opt.r_min);
  sweep_cmd->add_option("--r-max", opt.r_max);
  sweep_cmd->add_option("--r-step", opt.r_step);
  sweep_cmd->add_option("--trials", opt.trials)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", opt.seed);
  sweep_cmd->add_option("--method", opt.method)->check(CLI::IsMember({"dpll", "brute"}));
  sweep_cmd->add_option("--mode", opt.mode)->check(CLI::IsMember({"with_replacement", "without_replacement"}));
  sweep_cmd->add_flag("--timing", opt.timing, "record wall-clock solve times (output no longer reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fourier->parsed()) return cmd_fourier(*fourier, opt, out);
    if (bounds->parsed()) return cmd_bounds(*bounds, opt, out, err);
    if (curve->parsed()) return cmd_curve(*curve, opt, out);
    if (moments->parsed()) return cmd_moments(*moments, opt, out);
    if (gen->parsed()) return cmd_gen(*gen, opt, out);
    if (sweep_cmd->parsed()) return cmd_sweep(*sweep_cmd, opt, out, err);
  } catch (const DegenerateFunctionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fbounds
