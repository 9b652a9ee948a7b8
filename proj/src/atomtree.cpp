#include "cfgrank/atomtree.hpp"

#include <algorithm>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "cfgrank/errors.hpp"

namespace cfgrank {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) return std::numeric_limits<std::uint64_t>::max();
  return out;
}

// Each feature occurrence with the increment its innermost connective earns.
void increments(const CfgPredicate& p, CfgPredicate::Kind enclosing, double nbar, double all_share,
                std::vector<std::pair<std::string, double>>& out) {
  if (p.is_leaf()) {
    out.emplace_back(p.name, enclosing == CfgPredicate::Kind::All ? all_share : nbar);
    return;
  }
  for (const auto& c : p.children) increments(c, p.kind, nbar, all_share, out);
}

}  // namespace

AtomTree extract_atom_tree(const Uir& uir) {
  AtomTree t;
  t.root = uir.root;
  for (const auto& n : uir.nodes) {
    if (!n.is_atom()) continue;
    t.nodes.push_back(n.id);
    t.weights[n.id] = n.weight;
    if (n.predicate) t.predicates.emplace(n.id, *n.predicate);
  }
  for (const auto& n : uir.nodes) {
    if (!n.parent) continue;
    auto hat = uir.nearest_atom_ancestor(n.id);
    if (n.is_atom()) {
      t.edges.emplace_back(n.id, *hat);
      t.weights[*hat] = sat_add(t.weights[*hat], n.weight);
    } else if (n.term_kind != NodeKind::Block) {
      // plain node directly under an atom (body blocks skipped): folded into it, no edge
      NodeId p = *n.parent;
      while (p != *hat && uir[p].term_kind == NodeKind::Block) p = *uir[p].parent;
      if (p == *hat) t.weights[*hat] = sat_add(t.weights[*hat], n.weight);
    }
  }
  return t;
}

CentralityVector refine(const CentralityVector& v, const AtomTree& t) {
  std::uint64_t max_w = 0;
  for (const auto& [id, p] : t.predicates) max_w = std::max(max_w, t.weights.at(id));
  CentralityVector out = v;
  if (max_w == 0) return out;
  for (const auto& [id, p] : t.predicates) {
    double nbar = static_cast<double>(t.weights.at(id)) / static_cast<double>(max_w);
    double share = nbar / static_cast<double>(feature_occurrences(p).size());
    std::vector<std::pair<std::string, double>> inc;
    increments(p, p.kind, nbar, share, inc);
    for (const auto& [f, d] : inc) {
      auto it = out.entries.find(f);
      if (it == out.entries.end()) throw UnknownFeature(f);
      it->second += d;
    }
  }
  return out;
}

AtomTreeMetrics atomtree_metrics(const AtomTree& t) {
  return {t.predicates.size(), t.edges.size()};
}

std::string to_dot(const AtomTree& t) {
  std::ostringstream os;
  os << "digraph atoms {\n";
  for (NodeId id : t.nodes) {
    std::string label = "G";
    if (auto it = t.predicates.find(id); it != t.predicates.end()) {
      label.clear();
      for (char c : to_source(it->second)) {
        if (c == '"') label += '\\';
        label += c;
      }
    }
    os << "  n" << id << " [label=\"" << id << ": " << label << "\\nw=" << t.weights.at(id) << "\"];\n";
  }
  for (const auto& [a, b] : t.edges) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const AtomTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId id : t.nodes) {
    auto it = t.predicates.find(id);
    nodes.push_back({{"id", id},
                     {"cfg", it == t.predicates.end() ? nlohmann::json(nullptr) : nlohmann::json(to_source(it->second))},
                     {"weight", t.weights.at(id)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : t.edges) edges.push_back({a, b});
  return nlohmann::json{{"nodes", nodes}, {"edges", edges}}.dump(2);
}

}  // namespace cfgrank
