#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cfgrank/featgraph.hpp"
#include "cfgrank/frontend.hpp"

namespace cfgrank {

struct PropFormula {
  enum class Op { True, False, Var, Not, And, Or, Implies };

  Op op = Op::True;
  std::string var;
  std::vector<PropFormula> args;

  static PropFormula top() { return {Op::True, {}, {}}; }
  static PropFormula bottom() { return {Op::False, {}, {}}; }
  static PropFormula variable(std::string v) { return {Op::Var, std::move(v), {}}; }
  static PropFormula negation(PropFormula f) { return {Op::Not, {}, {std::move(f)}}; }
  static PropFormula conj(std::vector<PropFormula> fs) { return {Op::And, {}, std::move(fs)}; }
  static PropFormula disj(std::vector<PropFormula> fs) { return {Op::Or, {}, std::move(fs)}; }
  static PropFormula implies(PropFormula a, PropFormula b) {
    return {Op::Implies, {}, {std::move(a), std::move(b)}};
  }

  friend bool operator==(const PropFormula&, const PropFormula&) = default;
};

std::string to_string(const PropFormula& f);
std::string to_json(const PropFormula& f);
std::set<std::string> variables(const PropFormula& f);
bool evaluate(const PropFormula& f, const std::map<std::string, bool>& env);

/// Maps a cfg predicate to a formula: Single -> f, Not -> !f, Any -> or, All -> and.
PropFormula ell(const CfgPredicate& p);

enum class PhiMode {
  Implication,  // f => l(pred(f))
  Literal,      // l(pred(f)) as a bare conjunct
};

PropFormula build_formula(const FeatureGraph& g, const Manifest& m, PhiMode mode = PhiMode::Implication);

/// Clauses over 1-based variable indices; a negative literal is -index.
struct CnfFormula {
  std::vector<std::string> names;      // names[i - 1] is variable i
  std::map<std::string, int> index;
  std::vector<std::vector<int>> clauses;  // deduplicated, tautology-free, sorted

  int num_vars() const { return static_cast<int>(names.size()); }
  /// Registers a name if unknown and returns its index.
  int var(const std::string& name);
  friend bool operator==(const CnfFormula& a, const CnfFormula& b) {
    return a.names == b.names && a.clauses == b.clauses;
  }
};

inline constexpr std::size_t kDefaultBlowupLimit = 1'000'000;

/// Equivalence-preserving conversion (no auxiliary variables). Variables are
/// the formula's variables plus `extra_vars`, indexed in name order.
CnfFormula to_cnf(const PropFormula& f, const std::set<std::string>& extra_vars = {},
                  std::size_t limit = kDefaultBlowupLimit);

/// Graph features and manifest features; G and PATCH excluded.
std::set<std::string> feature_variables(const FeatureGraph& g, const Manifest& m);

PropFormula as_formula(const CnfFormula& c);

std::string export_dimacs(const CnfFormula& c);

}  // namespace cfgrank
