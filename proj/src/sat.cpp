#include "cfgrank/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cfgrank {

Solver::Solver(const CnfFormula& cnf)
    : num_vars_(cnf.num_vars()),
      watches_(2 * static_cast<std::size_t>(cnf.num_vars()) + 2),
      vals_(static_cast<std::size_t>(cnf.num_vars()) + 1, -1) {
  for (const auto& c : cnf.clauses) add_clause(c);
}

void Solver::check_literal(int lit) const {
  if (lit == 0 || std::abs(lit) > num_vars_) {
    throw std::out_of_range("literal " + std::to_string(lit) + " outside 1.." + std::to_string(num_vars_));
  }
}

void Solver::add_clause(std::vector<int> clause) {
  for (int l : clause) check_literal(l);
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (clause[i] == -clause[j]) return;  // tautology
    }
  }
  if (clause.empty()) {
    has_empty_ = true;
    return;
  }
  if (clause.size() == 1) {
    units_.push_back(clause[0]);
    return;
  }
  std::size_t id = clauses_.size();
  watches_[code(clause[0])].push_back(id);
  watches_[code(clause[1])].push_back(id);
  clauses_.push_back(std::move(clause));
}

int Solver::value(int lit) const {
  signed char v = vals_[static_cast<std::size_t>(std::abs(lit))];
  if (v < 0) return -1;
  return (lit > 0) == (v == 1) ? 1 : 0;
}

bool Solver::assign(int lit) {
  int v = value(lit);
  if (v == 0) return false;
  if (v == 1) return true;
  vals_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : 0;
  trail_.push_back(lit);
  return true;
}

void Solver::undo_to(std::size_t trail_size) {
  while (trail_.size() > trail_size) {
    vals_[static_cast<std::size_t>(std::abs(trail_.back()))] = -1;
    trail_.pop_back();
  }
  qhead_ = std::min(qhead_, trail_size);
}

// Returns false on conflict.
bool Solver::propagate() {
  while (qhead_ < trail_.size()) {
    int falsified = -trail_[qhead_++];
    auto& ws = watches_[code(falsified)];
    std::size_t keep = 0;
    bool conflict = false;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      std::size_t cid = ws[i];
      if (conflict) {
        ws[keep++] = cid;
        continue;
      }
      auto& c = clauses_[cid];
      if (c[0] == falsified) std::swap(c[0], c[1]);
      if (value(c[0]) == 1) {
        ws[keep++] = cid;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[code(c[1])].push_back(cid);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = cid;
      if (!assign(c[0])) conflict = true;
    }
    ws.resize(keep);
    if (conflict) return false;
  }
  return true;
}

std::optional<Assignment> Solver::solve(const std::vector<int>& assumptions) {
  for (int l : assumptions) check_literal(l);
  undo_to(0);
  qhead_ = 0;
  if (has_empty_) return std::nullopt;
  for (int u : units_) {
    if (!assign(u)) return std::nullopt;
  }
  if (!propagate()) return std::nullopt;

  struct Level {
    std::size_t trail_start;
    int decision;
    bool flipped;
  };
  std::vector<Level> levels;
  std::size_t next_assumption = 0;
  int next_var = 1;
  std::size_t steps = 0;

  // Undo the deepest unflipped decision and try its negation; assumption
  // levels count as already flipped.
  auto backtrack = [&]() -> bool {
    while (!levels.empty() && levels.back().flipped) {
      undo_to(levels.back().trail_start);
      levels.pop_back();
    }
    if (levels.empty()) return false;
    Level lv = levels.back();
    undo_to(lv.trail_start);
    levels.back().decision = -lv.decision;
    levels.back().flipped = true;
    assign(-lv.decision);
    next_var = 1;
    return true;
  };

  auto tick = [&] {
    if (interrupt_ && (++steps & 0x3ff) == 0) interrupt_();
  };

  for (;;) {
    tick();
    int lit = 0;
    bool is_assumption = false;
    while (next_assumption < assumptions.size()) {
      int a = assumptions[next_assumption];
      int v = value(a);
      if (v == 0) return std::nullopt;
      ++next_assumption;
      if (v == -1) {
        lit = a;
        is_assumption = true;
        break;
      }
    }
    if (lit == 0) {
      while (next_var <= num_vars_ && vals_[static_cast<std::size_t>(next_var)] >= 0) ++next_var;
      if (next_var > num_vars_) break;
      lit = next_var;
    }
    levels.push_back({trail_.size(), lit, is_assumption});
    assign(lit);
    while (!propagate()) {
      if (!backtrack()) return std::nullopt;
      tick();
    }
  }

  Assignment a;
  a.values.assign(static_cast<std::size_t>(num_vars_) + 1, false);
  for (int v = 1; v <= num_vars_; ++v) a.values[static_cast<std::size_t>(v)] = vals_[static_cast<std::size_t>(v)] == 1;
  return a;
}

std::optional<Assignment> solve(const CnfFormula& cnf, const std::vector<int>& assumptions) {
  return Solver(cnf).solve(assumptions);
}

std::vector<int> blocking_clause(const Assignment& a) {
  std::vector<int> c;
  for (int v = 1; v <= a.num_vars(); ++v) c.push_back(a[v] ? -v : v);
  return c;
}

CnfFormula block(const CnfFormula& cnf, const Assignment& a) {
  if (a.num_vars() != cnf.num_vars()) throw std::invalid_argument("assignment does not cover the formula");
  CnfFormula out = cnf;
  auto c = blocking_clause(a);
  if (std::find(out.clauses.begin(), out.clauses.end(), c) == out.clauses.end()) out.clauses.push_back(std::move(c));
  return out;
}

bool verify(const CnfFormula& cnf, const Assignment& a) {
  if (a.num_vars() < cnf.num_vars()) return false;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int l : clause) {
      if (a.satisfies(l)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace cfgrank
