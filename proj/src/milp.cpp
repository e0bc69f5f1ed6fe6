#include "mtd/milp.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace mtd::milp {

namespace {

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string sanitize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "?";
}

std::int64_t denominator_lcm(const std::vector<Term>& terms, const Rational& extra) {
  std::int64_t l = extra.denominator();
  for (const auto& t : terms) l = std::lcm(l, t.coef.denominator());
  return l;
}

// Exact decimal when the denominator only has factors 2 and 5.
std::string render_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  std::int64_t d = r.denominator();
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  std::ostringstream os;
  if (d == 1) {
    int digits = std::max(twos, fives);
    Rational scaled = r;
    for (int i = 0; i < digits; ++i) scaled *= 10;
    std::int64_t n = scaled.numerator();
    std::string mag = std::to_string(n < 0 ? -n : n);
    if (static_cast<int>(mag.size()) <= digits) mag.insert(0, digits - mag.size() + 1, '0');
    mag.insert(mag.size() - digits, ".");
    if (n < 0) os << '-';
    os << mag;
    return os.str();
  }
  os.precision(17);
  os << boost::rational_cast<double>(r);
  return os.str();
}

void write_terms(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& terms) {
  // Lines stay well under the 255-character limit of common LP readers.
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [coef, name] = terms[i];
    if (i > 0 && i % 8 == 0) os << "\n   ";
    bool neg = !coef.empty() && coef.front() == '-';
    std::string mag = neg ? coef.substr(1) : coef;
    if (i == 0) {
      os << (neg ? "- " : "") << mag << ' ' << name;
    } else {
      os << (neg ? " - " : " + ") << mag << ' ' << name;
    }
  }
}

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

VarId BinaryProgram::add_var(std::string label) {
  if (!valid_label(label)) throw ModelError("invalid variable label '" + label + "'");
  if (by_label_.contains(label)) throw ModelError("duplicate variable label '" + label + "'");
  VarId id{labels_.size()};
  by_label_.emplace(label, id.index);
  labels_.push_back(std::move(label));
  return id;
}

void BinaryProgram::check_terms(const std::vector<Term>& terms) const {
  std::unordered_set<std::size_t> seen;
  for (const auto& t : terms) {
    if (t.var.index >= labels_.size())
      throw ModelError("unknown variable index " + std::to_string(t.var.index));
    if (!seen.insert(t.var.index).second)
      throw ModelError("variable '" + labels_[t.var.index] + "' repeated in one expression");
  }
}

ConstraintId BinaryProgram::add_constraint(LinearConstraint c) {
  if (c.tag.empty()) throw ModelError("constraint tag must not be empty");
  check_terms(c.terms);
  ConstraintId id{constraints_.size()};
  constraints_.push_back(std::move(c));
  return id;
}

VarId BinaryProgram::linearize_product(VarId x, VarId y, std::string label) {
  check_terms({{1, x}});
  check_terms({{1, y}});
  if (x == y) throw ModelError("product of a variable with itself");
  if (label.empty()) label = "prod_" + labels_[x.index] + "_" + labels_[y.index];
  VarId w = add_var(std::move(label));
  add_constraint({{{1, w}, {-1, x}}, Sense::LessEqual, 0, "product_upper_left"});
  add_constraint({{{1, w}, {-1, y}}, Sense::LessEqual, 0, "product_upper_right"});
  add_constraint({{{1, w}, {-1, x}, {-1, y}}, Sense::GreaterEqual, -1, "product_lower"});
  return w;
}

void BinaryProgram::set_objective(ObjectiveSense sense, std::vector<Term> terms) {
  check_terms(terms);
  objective_ = {sense, std::move(terms)};
}

std::optional<VarId> BinaryProgram::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return VarId{it->second};
}

Rational evaluate_objective(const BinaryProgram& model,
                            const std::vector<std::uint8_t>& assignment) {
  Rational v = 0;
  for (const auto& t : model.objective().terms)
    if (assignment.at(t.var.index)) v += t.coef;
  return v;
}

bool is_feasible(const BinaryProgram& model, const std::vector<std::uint8_t>& assignment) {
  if (assignment.size() != model.num_vars()) return false;
  for (const auto& c : model.constraints()) {
    Rational lhs = 0;
    for (const auto& t : c.terms)
      if (assignment[t.var.index]) lhs += t.coef;
    switch (c.sense) {
      case Sense::LessEqual: if (lhs > c.rhs) return false; break;
      case Sense::GreaterEqual: if (lhs < c.rhs) return false; break;
      case Sense::Equal: if (lhs != c.rhs) return false; break;
    }
  }
  return true;
}

std::string export_lp(const BinaryProgram& model) {
  std::ostringstream os;
  os << "\\ binary program: " << model.num_vars() << " variables, "
     << model.constraints().size() << " constraints\n";
  os << (model.objective().sense == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: ";
  {
    std::vector<std::pair<std::string, std::string>> terms;
    for (const auto& t : model.objective().terms)
      terms.emplace_back(render_rational(t.coef), model.label(t.var));
    if (terms.empty() && model.num_vars() > 0) terms.emplace_back("0", model.label(VarId{0}));
    write_terms(os, terms);
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints().size(); ++i) {
    const auto& c = model.constraints()[i];
    std::int64_t scale = denominator_lcm(c.terms, c.rhs);
    std::vector<std::pair<std::string, std::string>> terms;
    for (const auto& t : c.terms)
      terms.emplace_back(render_rational(t.coef * scale), model.label(t.var));
    if (terms.empty() && model.num_vars() > 0) terms.emplace_back("0", model.label(VarId{0}));
    os << " c" << i << '_' << sanitize(c.tag) << ": ";
    write_terms(os, terms);
    os << ' ' << sense_text(c.sense) << ' ' << render_rational(c.rhs * scale) << '\n';
  }
  os << "Binary\n";
  for (std::size_t i = 0; i < model.num_vars(); ++i) os << ' ' << model.label(VarId{i}) << '\n';
  os << "End\n";
  return os.str();
}

}  // namespace mtd::milp
