#include "fbounds/dpll.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <ostream>

#include "fbounds/errors.hpp"

namespace fbounds {
namespace {

constexpr signed char kUnassigned = -1;

class Solver {
 public:
  explicit Solver(const Cnf& cnf, DpllStats* stats) : cnf_(cnf), stats_(stats) {
    const int n = cnf.num_vars;
    value_.assign(static_cast<std::size_t>(n) + 1, kUnassigned);
    occ_.resize(2 * (static_cast<std::size_t>(n) + 1));
    active_.assign(occ_.size(), 0);
    mom_count_.assign(occ_.size(), 0);
    num_true_.assign(cnf.clauses.size(), 0);
    num_free_.assign(cnf.clauses.size(), 0);
    for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
      for (int lit : cnf.clauses[c]) {
        if (lit == 0 || std::abs(lit) > n) throw ArgumentError("clause literal out of range");
        occ_[slot(lit)].push_back(c);
        ++active_[slot(lit)];
      }
      num_free_[c] = static_cast<int>(cnf.clauses[c].size());
    }
  }

  std::optional<std::vector<bool>> run() {
    for (std::size_t c = 0; c < cnf_.clauses.size(); ++c) {
      if (cnf_.clauses[c].empty()) return std::nullopt;
      if (cnf_.clauses[c].size() == 1) units_.push_back(c);
    }
    if (!search(0)) return std::nullopt;
    std::vector<bool> model(value_.size(), false);
    for (std::size_t v = 1; v < value_.size(); ++v) model[v] = value_[v] == 1;
    return model;
  }

 private:
  static std::size_t slot(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0); }

  bool is_true(int lit) const {
    const signed char v = value_[static_cast<std::size_t>(std::abs(lit))];
    return v != kUnassigned && (v == 1) == (lit > 0);
  }

  // Makes `lit` true. Counters are always fully updated so undo stays exact.
  void assign(int lit) {
    value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : 0;
    trail_.push_back(lit);
    for (std::size_t c : occ_[slot(lit)]) {
      --num_free_[c];
      if (num_true_[c]++ == 0)
        for (int l : cnf_.clauses[c]) --active_[slot(l)];
    }
    for (std::size_t c : occ_[slot(-lit)]) {
      --num_free_[c];
      if (num_true_[c] == 0) {
        if (num_free_[c] == 0) conflict_ = true;
        else if (num_free_[c] == 1) units_.push_back(c);
      }
    }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const int lit = trail_.back();
      trail_.pop_back();
      for (std::size_t c : occ_[slot(lit)]) {
        ++num_free_[c];
        if (--num_true_[c] == 0)
          for (int l : cnf_.clauses[c]) ++active_[slot(l)];
      }
      for (std::size_t c : occ_[slot(-lit)]) ++num_free_[c];
      value_[static_cast<std::size_t>(std::abs(lit))] = kUnassigned;
    }
  }

  bool propagate() {
    for (;;) {
      while (!units_.empty() && !conflict_) {
        const std::size_t c = units_.back();
        units_.pop_back();
        if (num_true_[c] > 0) continue;
        if (num_free_[c] == 0) {
          conflict_ = true;
          break;
        }
        for (int l : cnf_.clauses[c]) {
          if (value_[static_cast<std::size_t>(std::abs(l))] == kUnassigned) {
            if (stats_) ++stats_->propagations;
            assign(l);
            break;
          }
        }
      }
      if (conflict_) return false;
      bool pure_found = false;
      for (int v = 1; v <= cnf_.num_vars; ++v) {
        if (value_[v] != kUnassigned) continue;
        const int pos = active_[slot(v)], neg = active_[slot(-v)];
        if (pos > 0 && neg == 0) {
          assign(v);
          pure_found = true;
        } else if (neg > 0 && pos == 0) {
          assign(-v);
          pure_found = true;
        }
      }
      if (!pure_found && units_.empty()) return true;
    }
  }

  // Most occurrences in the shortest unsatisfied clauses; ties go to the
  // variable with more occurrences among all unsatisfied clauses.
  int pick_branch_variable() {
    int min_free = -1;
    for (std::size_t c = 0; c < num_free_.size(); ++c)
      if (num_true_[c] == 0 && (min_free < 0 || num_free_[c] < min_free)) min_free = num_free_[c];
    if (min_free < 0) return 0;
    std::fill(mom_count_.begin(), mom_count_.end(), 0);
    for (std::size_t c = 0; c < num_free_.size(); ++c) {
      if (num_true_[c] != 0 || num_free_[c] != min_free) continue;
      for (int l : cnf_.clauses[c])
        if (value_[static_cast<std::size_t>(std::abs(l))] == kUnassigned) ++mom_count_[slot(l)];
    }
    int best = 0;
    long long best_score = -1;
    for (int v = 1; v <= cnf_.num_vars; ++v) {
      if (value_[v] != kUnassigned) continue;
      const long long pos = mom_count_[slot(v)], neg = mom_count_[slot(-v)];
      const long long score = ((pos + neg) << 32) + ((pos * neg) << 16) + active_[slot(v)] + active_[slot(-v)];
      if (pos + neg > 0 && score > best_score) {
        best_score = score;
        best = v;
      }
    }
    return best;
  }

  bool search(int decision) {
    const std::size_t mark = trail_.size();
    if (decision != 0) {
      if (stats_) ++stats_->decisions;
      assign(decision);
    }
    if (!propagate()) {
      if (stats_) ++stats_->conflicts;
      conflict_ = false;
      units_.clear();
      undo_to(mark);
      return false;
    }
    const int best = pick_branch_variable();
    if (best == 0) return true;  // every clause is satisfied
    const int first = mom_count_[slot(best)] >= mom_count_[slot(-best)] ? best : -best;
    if (search(first) || search(-first)) return true;
    undo_to(mark);
    return false;
  }

  const Cnf& cnf_;
  DpllStats* stats_;
  std::vector<signed char> value_;
  std::vector<std::vector<std::size_t>> occ_;
  std::vector<int> active_;  // unsatisfied clauses containing each literal
  std::vector<int> mom_count_;
  std::vector<int> num_true_;
  std::vector<int> num_free_;
  std::vector<int> trail_;
  std::vector<std::size_t> units_;
  bool conflict_ = false;
};


// Same search for at most 64 variables, with each clause held as two literal
// masks. Every level keeps the list of its still-unsatisfied clauses, so
// backtracking is just returning to the parent's list.
class BitSolver {
 public:
  BitSolver(const Cnf& cnf, DpllStats* stats) : stats_(stats), num_vars_(cnf.num_vars) {
    for (const auto& clause : cnf.clauses) {
      Clause c;
      for (int lit : clause) {
        if (lit == 0 || std::abs(lit) > num_vars_) throw ArgumentError("clause literal out of range");
        (lit > 0 ? c.pos : c.neg) |= std::uint64_t{1} << (std::abs(lit) - 1);
      }
      clauses_.push_back(c);
    }
    // Depth never exceeds the variable count; reserving keeps level references stable.
    levels_.reserve(static_cast<std::size_t>(num_vars_) + 2);
  }

  std::optional<std::vector<bool>> run() {
    for (const Clause& c : clauses_)
      if (!(c.pos | c.neg)) return std::nullopt;
    if (!search(0, 0, 0, clauses_, 0)) return std::nullopt;
    std::vector<bool> model(static_cast<std::size_t>(num_vars_) + 1, false);
    for (int v = 1; v <= num_vars_; ++v) model[v] = (model_true_ >> (v - 1)) & 1;
    return model;
  }

 private:
  struct Clause {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
  };

  // Unit propagation and pure literals to a fixpoint; `out` receives the
  // clauses that are still unsatisfied. False on conflict.
  bool propagate(std::uint64_t& t, std::uint64_t& f, const std::vector<Clause>& in,
                 std::vector<Clause>& out) {
    out.clear();
    const std::vector<Clause>* src = &in;
    for (;;) {
      bool changed = false;
      std::uint64_t pos_occ = 0, neg_occ = 0;
      std::size_t kept = 0;
      const std::size_t count = src->size();
      for (std::size_t i = 0; i < count; ++i) {
        const Clause c = (*src)[i];
        if ((c.pos & t) | (c.neg & f)) continue;
        const std::uint64_t free = ~(t | f);
        const std::uint64_t fp = c.pos & free, fn = c.neg & free;
        if (!(fp | fn)) return false;
        if (__builtin_popcountll(fp | fn) == 1) {
          if (fp) t |= fp;
          else f |= fn;
          if (stats_) ++stats_->propagations;
          changed = true;
          continue;
        }
        if (src == &out) out[kept] = c;
        else out.push_back(c);
        ++kept;
        pos_occ |= fp;
        neg_occ |= fn;
      }
      out.resize(kept);
      // Occurrences were gathered before later assignments in the pass, so
      // they over-approximate and purity stays sound.
      const std::uint64_t free = ~(t | f);
      const std::uint64_t pure_pos = pos_occ & ~neg_occ & free, pure_neg = neg_occ & ~pos_occ & free;
      if (pure_pos | pure_neg) {
        t |= pure_pos;
        f |= pure_neg;
        changed = true;
      }
      if (!changed) return true;
      src = &out;
    }
  }

  // Most occurrences in the shortest unsatisfied clauses (both polarities,
  // favouring balanced ones); ties go to occurrences in the next size up.
  int pick(std::uint64_t t, std::uint64_t f, const std::vector<Clause>& live) {
    const std::uint64_t free = ~(t | f);
    int min_size = 65;
    for (const Clause& c : live) min_size = std::min(min_size, __builtin_popcountll((c.pos | c.neg) & free));
    std::fill(mom_.begin(), mom_.end(), 0);
    std::fill(occ_.begin(), occ_.end(), 0);
    for (const Clause& c : live) {
      const std::uint64_t fp = c.pos & free, fn = c.neg & free;
      const int size = __builtin_popcountll(fp | fn);
      if (size > min_size + 1) continue;
      std::vector<int>& counts = size == min_size ? mom_ : occ_;
      for (std::uint64_t b = fp; b; b &= b - 1) ++counts[2 * __builtin_ctzll(b)];
      for (std::uint64_t b = fn; b; b &= b - 1) ++counts[2 * __builtin_ctzll(b) + 1];
    }
    int best = 0;
    long long best_score = -1;
    for (int v = 0; v < num_vars_; ++v) {
      const long long p = mom_[2 * v], n = mom_[2 * v + 1];
      if (p + n == 0) continue;
      const long long score = ((p + n) << 32) + ((p * n) << 16) + occ_[2 * v] + occ_[2 * v + 1];
      if (score > best_score) {
        best_score = score;
        best = p >= n ? v + 1 : -(v + 1);
      }
    }
    return best;
  }

  bool search(std::uint64_t t, std::uint64_t f, int decision, const std::vector<Clause>& parent,
              std::size_t depth) {
    if (decision != 0) {
      if (stats_) ++stats_->decisions;
      (decision > 0 ? t : f) |= std::uint64_t{1} << (std::abs(decision) - 1);
    }
    if (levels_.size() <= depth) levels_.emplace_back();
    std::vector<Clause>& live = levels_[depth];
    if (!propagate(t, f, parent, live)) {
      if (stats_) ++stats_->conflicts;
      return false;
    }
    if (live.empty()) {
      model_true_ = t;
      return true;
    }
    const int lit = pick(t, f, live);
    if (search(t, f, lit, live, depth + 1)) return true;
    return search(t, f, -lit, live, depth + 1);
  }

  DpllStats* stats_;
  int num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Clause>> levels_;
  std::vector<int> mom_ = std::vector<int>(128);
  std::vector<int> occ_ = std::vector<int>(128);
  std::uint64_t model_true_ = 0;
};

}  // namespace

void write_dimacs(const Cnf& cnf, std::ostream& out) {
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

std::optional<std::vector<bool>> solve_dpll(const Cnf& cnf, DpllStats* stats) {
  if (cnf.num_vars < 0) throw ArgumentError("negative variable count");
  if (cnf.num_vars <= 64) return BitSolver(cnf, stats).run();
  return Solver(cnf, stats).run();
}

}  // namespace fbounds
