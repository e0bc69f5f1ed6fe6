#pragma once

// Pure-binary linear programs, an exact branch-and-bound solver and an
// LP-format writer.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

namespace mtd::milp {

using Rational = boost::rational<std::int64_t>;

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VarId {
  std::size_t index = 0;
  auto operator<=>(const VarId&) const = default;
};

struct ConstraintId {
  std::size_t index = 0;
  auto operator<=>(const ConstraintId&) const = default;
};

enum class Sense { LessEqual, GreaterEqual, Equal };
enum class ObjectiveSense { Maximize, Minimize };

struct Term {
  Rational coef;
  VarId var;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  Rational rhs;
  std::string tag;
};

struct Objective {
  ObjectiveSense sense = ObjectiveSense::Maximize;
  std::vector<Term> terms;
};

/// A model over binary variables. Variables and constraints are append-only;
/// every term must reference a variable created through add_var.
class BinaryProgram {
 public:
  VarId add_var(std::string label);

  /// Rejects unknown variables, duplicate variables within the terms and an
  /// empty tag.
  ConstraintId add_constraint(LinearConstraint c);

  /// Adds w with w <= x, w <= y, w >= x + y - 1, so that w = x*y in every
  /// feasible binary assignment. An empty label becomes "prod_<x>_<y>".
  VarId linearize_product(VarId x, VarId y, std::string label = {});

  void set_objective(ObjectiveSense sense, std::vector<Term> terms);

  std::size_t num_vars() const { return labels_.size(); }
  const std::string& label(VarId v) const { return labels_.at(v.index); }
  std::optional<VarId> find(std::string_view label) const;
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }

 private:
  void check_terms(const std::vector<Term>& terms) const;

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> by_label_;
  std::vector<LinearConstraint> constraints_;
  Objective objective_;
};

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };

std::string_view to_string(SolveStatus s);

struct SolveLimits {
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  double time_budget_seconds = std::numeric_limits<double>::infinity();
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  /// Indexed by VarId::index. Empty when no feasible point was found.
  std::vector<std::uint8_t> assignment;
  Rational objective_value;
  std::uint64_t nodes = 0;
  double seconds = 0.0;

  bool has_assignment() const { return !assignment.empty(); }
  bool value(VarId v) const { return assignment.at(v.index) != 0; }
};

/// Depth-first branch and bound. Branches on the lowest free VarId, value 1
/// first, with bound propagation over all rows. A node is pruned once its
/// objective bound no longer beats the incumbent.
Solution solve(const BinaryProgram& model, const SolveLimits& limits = {});

/// Evaluates the objective at an assignment (exact).
Rational evaluate_objective(const BinaryProgram& model,
                            const std::vector<std::uint8_t>& assignment);

/// True if the assignment satisfies every stored constraint.
bool is_feasible(const BinaryProgram& model, const std::vector<std::uint8_t>& assignment);

/// CPLEX LP text: objective, "Subject To", "Binary" section, "End".
/// Rows with fractional coefficients are scaled to integers.
std::string export_lp(const BinaryProgram& model);

}  // namespace mtd::milp
