#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cfgrank/logic.hpp"

namespace cfgrank {

/// Total assignment; values[v] is variable v (1-based, slot 0 unused).
struct Assignment {
  std::vector<bool> values;

  bool operator[](int var) const { return values.at(static_cast<std::size_t>(var)); }
  bool satisfies(int lit) const { return lit > 0 ? (*this)[lit] : !(*this)[-lit]; }
  int num_vars() const { return values.empty() ? 0 : static_cast<int>(values.size()) - 1; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// DPLL with two watched literals and chronological backtracking. Every
/// solve() starts from an empty trail, so clauses may be added in between.
class Solver {
 public:
  explicit Solver(const CnfFormula& cnf);

  void add_clause(std::vector<int> clause);

  /// Assumptions are literals forced as the first decisions.
  std::optional<Assignment> solve(const std::vector<int>& assumptions = {});

  /// Invoked periodically during search; may throw to abort.
  void set_interrupt(std::function<void()> cb) { interrupt_ = std::move(cb); }

  int num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size() + units_.size() + (has_empty_ ? 1 : 0); }

 private:
  static std::size_t code(int lit) { return lit > 0 ? 2 * static_cast<std::size_t>(lit) : 2 * static_cast<std::size_t>(-lit) + 1; }
  int value(int lit) const;  // 1 true, 0 false, -1 unassigned
  bool assign(int lit);
  bool propagate();
  void undo_to(std::size_t trail_size);
  void check_literal(int lit) const;

  int num_vars_;
  bool has_empty_ = false;
  std::vector<int> units_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<std::size_t>> watches_;  // by literal code
  std::vector<signed char> vals_;                  // by variable
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  std::function<void()> interrupt_;
};

std::optional<Assignment> solve(const CnfFormula& cnf, const std::vector<int>& assumptions = {});

/// Returns `cnf` plus the clause excluding exactly `a`.
CnfFormula block(const CnfFormula& cnf, const Assignment& a);
std::vector<int> blocking_clause(const Assignment& a);

/// Clause-wise check, independent of the solver.
bool verify(const CnfFormula& cnf, const Assignment& a);

}  // namespace cfgrank
