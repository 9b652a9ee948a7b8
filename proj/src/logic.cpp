#include "cfgrank/logic.hpp"

#include <algorithm>
#include <cstdlib>
#include <iterator>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cfgrank/errors.hpp"

namespace cfgrank {

namespace {

using Clause = std::vector<int>;
using ClauseSet = std::set<Clause>;

bool lit_less(int a, int b) {
  if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
  return a < b;
}

// NNF with constants folded away where possible.
PropFormula nnf(const PropFormula& f, bool negate) {
  using Op = PropFormula::Op;
  switch (f.op) {
    case Op::True:
      return negate ? PropFormula::bottom() : PropFormula::top();
    case Op::False:
      return negate ? PropFormula::top() : PropFormula::bottom();
    case Op::Var:
      return negate ? PropFormula::negation(f) : f;
    case Op::Not:
      return nnf(f.args.at(0), !negate);
    case Op::And:
    case Op::Or: {
      std::vector<PropFormula> args;
      for (const auto& a : f.args) args.push_back(nnf(a, negate));
      bool conj = (f.op == Op::And) != negate;
      return conj ? PropFormula::conj(std::move(args)) : PropFormula::disj(std::move(args));
    }
    case Op::Implies: {
      // a => b  ==  !a | b
      PropFormula d = PropFormula::disj({PropFormula::negation(f.args.at(0)), f.args.at(1)});
      return nnf(d, negate);
    }
  }
  throw std::logic_error("bad formula op");
}

ClauseSet normalize(ClauseSet s) {
  if (s.count(Clause{})) return {Clause{}};
  return s;
}

std::optional<Clause> merge(const Clause& a, const Clause& b) {
  Clause out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), lit_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] == -out[i - 1]) return std::nullopt;  // tautology
  }
  return out;
}

class Converter {
 public:
  Converter(const std::map<std::string, int>& index, std::size_t limit) : index_(index), limit_(limit) {}

  ClauseSet convert(const PropFormula& f) {
    using Op = PropFormula::Op;
    switch (f.op) {
      case Op::True:
        return {};
      case Op::False:
        return {Clause{}};
      case Op::Var:
        return {Clause{index_.at(f.var)}};
      case Op::Not:
        return {Clause{-index_.at(f.args.at(0).var)}};
      case Op::And: {
        ClauseSet out;
        for (const auto& a : f.args) {
          for (auto& c : convert(a)) {
            if (c.empty()) return {Clause{}};
            out.insert(std::move(c));
          }
          check(out.size());
        }
        return out;
      }
      case Op::Or: {
        ClauseSet acc{Clause{}};
        for (const auto& a : f.args) {
          ClauseSet rhs = convert(a);
          if (rhs.empty()) return {};  // a true disjunct
          if (acc.size() * rhs.size() > limit_) throw BlowupLimit(limit_);
          ClauseSet next;
          for (const auto& x : acc) {
            for (const auto& y : rhs) {
              if (auto m = merge(x, y)) next.insert(std::move(*m));
            }
          }
          acc = normalize(std::move(next));
          if (acc.empty()) return {};
        }
        return acc;
      }
      case Op::Implies:
        break;
    }
    throw std::logic_error("formula not in negation normal form");
  }

 private:
  void check(std::size_t n) const {
    if (n > limit_) throw BlowupLimit(limit_);
  }

  const std::map<std::string, int>& index_;
  std::size_t limit_;
};

void collect_vars(const PropFormula& f, std::set<std::string>& out) {
  if (f.op == PropFormula::Op::Var) out.insert(f.var);
  for (const auto& a : f.args) collect_vars(a, out);
}

nlohmann::json formula_json(const PropFormula& f) {
  using Op = PropFormula::Op;
  auto list = [&](const char* key) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : f.args) arr.push_back(formula_json(a));
    return nlohmann::json{{key, arr}};
  };
  switch (f.op) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Var:
      return {{"var", f.var}};
    case Op::Not:
      return {{"not", formula_json(f.args.at(0))}};
    case Op::And:
      return list("and");
    case Op::Or:
      return list("or");
    case Op::Implies:
      return list("implies");
  }
  return nullptr;
}

void print(const PropFormula& f, std::ostream& os) {
  using Op = PropFormula::Op;
  auto join = [&](const char* sep, const char* empty) {
    if (f.args.empty()) {
      os << empty;
      return;
    }
    os << '(';
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      if (i) os << sep;
      print(f.args[i], os);
    }
    os << ')';
  };
  switch (f.op) {
    case Op::True:
      os << "true";
      break;
    case Op::False:
      os << "false";
      break;
    case Op::Var:
      os << f.var;
      break;
    case Op::Not:
      os << '!';
      print(f.args.at(0), os);
      break;
    case Op::And:
      join(" & ", "true");
      break;
    case Op::Or:
      join(" | ", "false");
      break;
    case Op::Implies:
      join(" => ", "true");
      break;
  }
}

}  // namespace

int CnfFormula::var(const std::string& name) {
  auto it = index.find(name);
  if (it != index.end()) return it->second;
  names.push_back(name);
  int id = static_cast<int>(names.size());
  index.emplace(name, id);
  return id;
}

std::string to_string(const PropFormula& f) {
  std::ostringstream os;
  print(f, os);
  return os.str();
}

std::string to_json(const PropFormula& f) { return formula_json(f).dump(2); }

std::set<std::string> variables(const PropFormula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

bool evaluate(const PropFormula& f, const std::map<std::string, bool>& env) {
  using Op = PropFormula::Op;
  switch (f.op) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Var:
      return env.at(f.var);
    case Op::Not:
      return !evaluate(f.args.at(0), env);
    case Op::And:
      return std::all_of(f.args.begin(), f.args.end(), [&](const auto& a) { return evaluate(a, env); });
    case Op::Or:
      return std::any_of(f.args.begin(), f.args.end(), [&](const auto& a) { return evaluate(a, env); });
    case Op::Implies:
      return !evaluate(f.args.at(0), env) || evaluate(f.args.at(1), env);
  }
  return false;
}

PropFormula ell(const CfgPredicate& p) {
  switch (p.kind) {
    case CfgPredicate::Kind::Single:
      return PropFormula::variable(p.name);
    case CfgPredicate::Kind::Not:
      return PropFormula::negation(PropFormula::variable(p.name));
    case CfgPredicate::Kind::Any:
    case CfgPredicate::Kind::All: {
      std::vector<PropFormula> args;
      for (const auto& c : p.children) args.push_back(ell(c));
      return p.kind == CfgPredicate::Kind::Any ? PropFormula::disj(std::move(args))
                                               : PropFormula::conj(std::move(args));
    }
  }
  throw std::logic_error("bad predicate kind");
}

PropFormula build_formula(const FeatureGraph& g, const Manifest& m, PhiMode mode) {
  std::vector<PropFormula> conjuncts;
  for (const auto& [name, node] : g.nodes) {
    if (is_reserved_node(name) || node.predicates.empty()) continue;
    std::set<std::string> seen;
    std::vector<PropFormula> preds;
    for (const auto& p : node.predicates) {
      if (seen.insert(canonical_key(p)).second) preds.push_back(ell(p));
    }
    PropFormula phi = preds.size() == 1 ? std::move(preds.front()) : PropFormula::conj(std::move(preds));
    if (mode == PhiMode::Implication) {
      conjuncts.push_back(PropFormula::implies(PropFormula::variable(name), std::move(phi)));
    } else {
      conjuncts.push_back(std::move(phi));
    }
  }
  for (const auto& [key, w] : g.edges) {
    if (is_reserved_node(key.first) || is_reserved_node(key.second)) continue;
    conjuncts.push_back(PropFormula::implies(PropFormula::variable(key.first), PropFormula::variable(key.second)));
  }
  for (const auto& [f, deps] : m.features) {
    for (const auto& d : deps) {
      conjuncts.push_back(PropFormula::implies(PropFormula::variable(f), PropFormula::variable(d)));
    }
  }
  for (const auto& d : m.default_features) conjuncts.push_back(PropFormula::variable(d));
  if (conjuncts.empty()) return PropFormula::top();
  return PropFormula::conj(std::move(conjuncts));
}

CnfFormula to_cnf(const PropFormula& f, const std::set<std::string>& extra_vars, std::size_t limit) {
  CnfFormula out;
  std::set<std::string> vars = variables(f);
  vars.insert(extra_vars.begin(), extra_vars.end());
  for (const auto& v : vars) out.var(v);
  ClauseSet clauses = Converter(out.index, limit).convert(nnf(f, false));
  out.clauses.assign(clauses.begin(), clauses.end());
  return out;
}

std::set<std::string> feature_variables(const FeatureGraph& g, const Manifest& m) {
  std::set<std::string> out = m.all_features();
  for (const auto& [name, n] : g.nodes) {
    if (!is_reserved_node(name)) out.insert(name);
  }
  return out;
}

PropFormula as_formula(const CnfFormula& c) {
  std::vector<PropFormula> clauses;
  for (const auto& cl : c.clauses) {
    std::vector<PropFormula> lits;
    for (int l : cl) {
      PropFormula v = PropFormula::variable(c.names.at(std::abs(l) - 1));
      lits.push_back(l < 0 ? PropFormula::negation(std::move(v)) : std::move(v));
    }
    clauses.push_back(PropFormula::disj(std::move(lits)));
  }
  return PropFormula::conj(std::move(clauses));
}

std::string export_dimacs(const CnfFormula& c) {
  std::ostringstream os;
  for (int i = 1; i <= c.num_vars(); ++i) os << "c var " << i << ' ' << c.names[i - 1] << '\n';
  os << "p cnf " << c.num_vars() << ' ' << c.clauses.size() << '\n';
  for (const auto& cl : c.clauses) {
    for (int l : cl) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

}  // namespace cfgrank
