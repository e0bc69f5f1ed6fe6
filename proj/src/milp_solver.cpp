#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mtd/milp.hpp"

namespace mtd::milp {

namespace {

constexpr std::int8_t kFree = -1;

// Row in the form  sum(coef * var) <= rhs  with integer coefficients.
struct Row {
  std::vector<std::pair<std::uint32_t, std::int64_t>> terms;
  std::int64_t rhs = 0;
  std::int64_t max_abs = 0;
  std::int64_t min_activity = 0;
  bool queued = false;
};

// Set of variables of which at most one (or exactly one) can be 1. Used to
// tighten the free-variable objective bound.
struct Group {
  std::vector<std::uint32_t> vars;
  bool exactly_one = false;
  std::int64_t contribution = 0;
};

class Search {
 public:
  Search(const BinaryProgram& model, const SolveLimits& limits)
      : model_(model), limits_(limits), n_(model.num_vars()) {
    value_.assign(n_, kFree);
    occurs_.resize(n_);
    objective_.assign(n_, 0);
    groups_of_.resize(n_);
    build_rows();
    build_objective();
    build_groups();
  }

  Solution run() {
    start_ = std::chrono::steady_clock::now();
    Solution sol;
    bool exhausted = true;
    if (root_conflict_ || !propagate_all()) {
      sol.status = SolveStatus::Infeasible;
      sol.seconds = elapsed();
      return sol;
    }

    struct Frame {
      std::uint32_t var;
      std::size_t trail_mark;
      bool tried_zero;
    };
    std::vector<Frame> stack;

    auto backtrack = [&]() -> bool {
      while (!stack.empty()) {
        Frame& f = stack.back();
        undo_to(f.trail_mark);
        if (!f.tried_zero) {
          f.tried_zero = true;
          ++nodes_;
          assign(f.var, 0);
          if (propagate()) return true;
          continue;
        }
        stack.pop_back();
      }
      return false;
    };

    while (true) {
      if (out_of_budget()) {
        exhausted = false;
        break;
      }
      bool descend = true;
      if (has_incumbent_ && bound() <= incumbent_value_) descend = false;
      std::uint32_t var = 0;
      if (descend) {
        std::size_t from = stack.empty() ? 0 : stack.back().var + 1;
        while (from < n_ && value_[from] != kFree) ++from;
        if (from == n_) {
          record_incumbent();
          descend = false;
        } else {
          var = static_cast<std::uint32_t>(from);
        }
      }
      if (descend) {
        stack.push_back({var, trail_.size(), false});
        ++nodes_;
        assign(var, 1);
        if (propagate()) continue;
      }
      if (!backtrack()) break;
    }

    sol.nodes = nodes_;
    sol.seconds = elapsed();
    if (has_incumbent_) {
      sol.assignment = incumbent_;
      sol.objective_value = evaluate_objective(model_, incumbent_);
    }
    if (!exhausted) {
      sol.status = SolveStatus::BudgetExceeded;
    } else {
      sol.status = has_incumbent_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    }
    return sol;
  }

 private:
  void add_row(const std::vector<Term>& terms, const Rational& rhs, std::int64_t sign) {
    std::int64_t scale = rhs.denominator();
    for (const auto& t : terms) scale = std::lcm(scale, t.coef.denominator());
    Row row;
    for (const auto& t : terms) {
      Rational c = t.coef * scale * sign;
      std::int64_t a = c.numerator();
      if (a == 0) continue;
      row.terms.emplace_back(static_cast<std::uint32_t>(t.var.index), a);
      row.max_abs = std::max(row.max_abs, a < 0 ? -a : a);
      if (a < 0) row.min_activity += a;
    }
    row.rhs = (rhs * scale * sign).numerator();
    if (row.min_activity > row.rhs) root_conflict_ = true;
    std::uint32_t r = static_cast<std::uint32_t>(rows_.size());
    for (const auto& [v, a] : row.terms) occurs_[v].emplace_back(r, a);
    rows_.push_back(std::move(row));
  }

  void build_rows() {
    for (const auto& c : model_.constraints()) {
      if (c.sense == Sense::LessEqual || c.sense == Sense::Equal) add_row(c.terms, c.rhs, 1);
      if (c.sense == Sense::GreaterEqual || c.sense == Sense::Equal) add_row(c.terms, c.rhs, -1);
    }
  }

  void build_objective() {
    const auto& obj = model_.objective();
    std::int64_t scale = 1;
    for (const auto& t : obj.terms) scale = std::lcm(scale, t.coef.denominator());
    std::int64_t sign = obj.sense == ObjectiveSense::Maximize ? 1 : -1;
    for (const auto& t : obj.terms) objective_[t.var.index] = (t.coef * scale * sign).numerator();
  }

  // Cover objective variables by disjoint at-most-one / exactly-one rows.
  void build_groups() {
    struct Candidate {
      std::size_t constraint;
      bool exactly_one;
    };
    std::vector<Candidate> candidates;
    const auto& cons = model_.constraints();
    for (std::size_t i = 0; i < cons.size(); ++i) {
      const auto& c = cons[i];
      if (c.terms.size() < 2 || c.sense == Sense::GreaterEqual) continue;
      const Rational& k = c.terms.front().coef;
      if (k <= Rational(0)) continue;
      if (!std::all_of(c.terms.begin(), c.terms.end(), [&](const Term& t) { return t.coef == k; }))
        continue;
      Rational ratio = c.rhs / k;
      if (c.sense == Sense::Equal && ratio == Rational(1)) {
        candidates.push_back({i, true});
      } else if (c.sense == Sense::LessEqual && ratio >= Rational(1) && ratio < Rational(2)) {
        candidates.push_back({i, false});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
      if (a.exactly_one != b.exactly_one) return a.exactly_one;
      return cons[a.constraint].terms.size() > cons[b.constraint].terms.size();
    });

    std::vector<bool> claimed(n_, false);
    for (const auto& cand : candidates) {
      const auto& terms = cons[cand.constraint].terms;
      Group g;
      bool exactly = cand.exactly_one;
      for (const auto& t : terms) {
        std::size_t v = t.var.index;
        if (objective_[v] == 0) {
          if (exactly) g.vars.push_back(static_cast<std::uint32_t>(v));
        } else if (!claimed[v]) {
          g.vars.push_back(static_cast<std::uint32_t>(v));
        } else {
          exactly = false;
        }
      }
      if (!exactly) {
        std::erase_if(g.vars, [&](std::uint32_t v) { return objective_[v] == 0 || claimed[v]; });
      }
      if (g.vars.empty()) continue;
      g.exactly_one = exactly;
      std::uint32_t gi = static_cast<std::uint32_t>(groups_.size());
      for (auto v : g.vars) {
        if (objective_[v] != 0) claimed[v] = true;
        groups_of_[v].push_back(gi);
      }
      groups_.push_back(std::move(g));
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (!claimed[v] && objective_[v] > 0) {
        ungrouped_.push_back(true);
        free_positive_ += objective_[v];
      } else {
        ungrouped_.push_back(false);
      }
    }
    for (std::uint32_t g = 0; g < groups_.size(); ++g) {
      groups_[g].contribution = group_contribution(groups_[g]);
      group_total_ += groups_[g].contribution;
    }
  }

  std::int64_t group_contribution(const Group& g) const {
    std::int64_t best = g.exactly_one ? std::numeric_limits<std::int64_t>::min() : 0;
    for (auto v : g.vars) {
      if (value_[v] == 1) return 0;
      if (value_[v] == kFree) best = std::max(best, objective_[v]);
    }
    return best == std::numeric_limits<std::int64_t>::min() ? 0 : best;
  }

  void refresh_groups(std::uint32_t v) {
    for (auto gi : groups_of_[v]) {
      Group& g = groups_[gi];
      std::int64_t c = group_contribution(g);
      group_total_ += c - g.contribution;
      g.contribution = c;
    }
  }

  std::int64_t bound() const { return fixed_objective_ + free_positive_ + group_total_; }

  void assign(std::uint32_t v, std::int8_t val) {
    value_[v] = val;
    trail_.push_back(v);
    if (val == 1) fixed_objective_ += objective_[v];
    if (ungrouped_[v]) free_positive_ -= objective_[v];
    refresh_groups(v);
    for (const auto& [r, a] : occurs_[v]) {
      std::int64_t delta = (val == 1 && a > 0) ? a : (val == 0 && a < 0) ? -a : 0;
      if (delta == 0) continue;
      Row& row = rows_[r];
      row.min_activity += delta;
      if (row.min_activity > row.rhs) {
        conflict_ = true;
      } else if (row.rhs - row.min_activity < row.max_abs && !row.queued) {
        row.queued = true;
        queue_.push_back(r);
      }
    }
  }

  void unassign(std::uint32_t v) {
    std::int8_t val = value_[v];
    value_[v] = kFree;
    if (val == 1) fixed_objective_ -= objective_[v];
    if (ungrouped_[v]) free_positive_ += objective_[v];
    refresh_groups(v);
    for (const auto& [r, a] : occurs_[v]) {
      std::int64_t delta = (val == 1 && a > 0) ? a : (val == 0 && a < 0) ? -a : 0;
      rows_[r].min_activity -= delta;
    }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      std::uint32_t v = trail_.back();
      trail_.pop_back();
      unassign(v);
    }
    conflict_ = false;
  }

  bool propagate() {
    std::size_t head = 0;
    while (!conflict_ && head < queue_.size()) {
      std::uint32_t r = queue_[head++];
      Row& row = rows_[r];
      row.queued = false;
      std::int64_t slack = row.rhs - row.min_activity;
      if (slack >= row.max_abs) continue;
      for (const auto& [v, a] : row.terms) {
        if (value_[v] != kFree) continue;
        if ((a > 0 ? a : -a) > slack) {
          assign(v, a > 0 ? 0 : 1);
          if (conflict_) break;
        }
      }
    }
    for (std::size_t i = head; i < queue_.size(); ++i) rows_[queue_[i]].queued = false;
    queue_.clear();
    return !conflict_;
  }

  bool propagate_all() {
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
      rows_[r].queued = true;
      queue_.push_back(r);
    }
    return propagate();
  }

  void record_incumbent() {
    has_incumbent_ = true;
    incumbent_value_ = fixed_objective_;
    incumbent_.resize(n_);
    for (std::size_t v = 0; v < n_; ++v) incumbent_[v] = static_cast<std::uint8_t>(value_[v]);
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool out_of_budget() {
    if (nodes_ >= limits_.max_nodes) return true;
    // nodes_ can advance by more than one per iteration, so count checks separately.
    if ((++ticks_ & 255) == 0 && elapsed() > limits_.time_budget_seconds) return true;
    return false;
  }

  const BinaryProgram& model_;
  SolveLimits limits_;
  std::size_t n_;

  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> occurs_;
  std::vector<Row> rows_;
  std::vector<std::int64_t> objective_;
  std::vector<Group> groups_;
  std::vector<std::vector<std::uint32_t>> groups_of_;
  std::vector<bool> ungrouped_;

  std::int64_t fixed_objective_ = 0;
  std::int64_t free_positive_ = 0;
  std::int64_t group_total_ = 0;

  std::vector<std::uint32_t> trail_;
  std::vector<std::uint32_t> queue_;
  bool conflict_ = false;
  bool root_conflict_ = false;

  bool has_incumbent_ = false;
  std::int64_t incumbent_value_ = 0;
  std::vector<std::uint8_t> incumbent_;

  std::uint64_t nodes_ = 0;
  std::uint64_t ticks_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Solution solve(const BinaryProgram& model, const SolveLimits& limits) {
  Search search(model, limits);
  return search.run();
}

}  // namespace mtd::milp
