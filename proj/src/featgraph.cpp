#include "cfgrank/featgraph.hpp"

#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace cfgrank {

namespace {

std::int64_t feature_count(const CfgPredicate& p) {
  return static_cast<std::int64_t>(feature_occurrences(p).size());
}

void chi_into(const CfgPredicate& p, const Rational& w, ChiMode mode,
              std::vector<std::pair<std::string, Rational>>& out) {
  switch (p.kind) {
    case CfgPredicate::Kind::Single:
    case CfgPredicate::Kind::Not:
      out.emplace_back(p.name, w);
      return;
    case CfgPredicate::Kind::Any:
      for (const auto& c : p.children) chi_into(c, Rational(1), mode, out);
      return;
    case CfgPredicate::Kind::All:
      if (mode == ChiMode::FeatureCount) {
        Rational share = w / Rational(feature_count(p));
        for (const auto& c : p.children) chi_into(c, share, mode, out);
      } else {
        for (const auto& c : p.children) {
          chi_into(c, Rational(1) / (w * Rational(feature_count(c))), mode, out);
        }
      }
      return;
  }
}

FeatureNode& node(std::map<std::string, FeatureNode>& nodes, const std::string& name) {
  auto [it, inserted] = nodes.try_emplace(name);
  if (inserted) it->second.name = name;
  return it->second;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

nlohmann::json nodes_json(const std::map<std::string, FeatureNode>& nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [name, n] : nodes) {
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : n.predicates) preds.push_back(to_source(p));
    arr.push_back({{"name", name}, {"predicates", preds}});
  }
  return arr;
}

}  // namespace

Rational FeatureGraph::weight(const std::string& from, const std::string& to) const {
  auto it = edges.find({from, to});
  return it == edges.end() ? Rational(0) : it->second;
}

std::vector<std::pair<std::string, Rational>> chi(const CfgPredicate& p, const Rational& w,
                                                  ChiMode mode) {
  if (w <= Rational(0)) throw std::invalid_argument("chi requires a positive weight");
  std::vector<std::pair<std::string, Rational>> out;
  chi_into(p, w, mode, out);
  return out;
}

FeatureMultigraph extract_feature_graph(const Uir& uir, ChiMode mode) {
  FeatureMultigraph mg;
  node(mg.nodes, kGlobalNode);
  for (const auto& a : uir.nodes) {
    if (!a.is_atom() || !a.predicate) continue;
    auto parent = uir.nearest_atom_ancestor(a.id);
    if (!parent) continue;
    const UirNode& hat = uir[*parent];

    std::vector<std::string> targets;
    if (hat.predicate) {
      targets = feature_occurrences(*hat.predicate);
      for (const auto& f : targets) node(mg.nodes, f).predicates.push_back(*hat.predicate);
    } else {
      targets.push_back(kGlobalNode);
    }
    for (const auto& f : feature_occurrences(*a.predicate)) {
      node(mg.nodes, f).predicates.push_back(*a.predicate);
    }
    for (const auto& [f, w] : chi(*a.predicate, Rational(1), mode)) {
      for (const auto& t : targets) mg.edges.push_back({f, t, w});
    }
  }
  return mg;
}

FeatureGraph squash(const FeatureMultigraph& mg) {
  FeatureGraph g;
  g.nodes = mg.nodes;
  for (const auto& e : mg.edges) g.edges[{e.source, e.target}] += e.weight;
  return g;
}

FeatureGraph add_patch_node(FeatureGraph g) {
  if (!g.has_node(kGlobalNode)) throw std::invalid_argument("feature graph has no G node");
  node(g.nodes, kPatchNode);
  g.edges[{kGlobalNode, kPatchNode}] = Rational(1);
  for (const auto& [name, n] : g.nodes) {
    if (is_reserved_node(name)) continue;
    g.edges[{kPatchNode, name}] = Rational(1);
  }
  return g;
}

std::string to_dot(const FeatureMultigraph& mg) {
  std::ostringstream os;
  os << "digraph features {\n";
  for (const auto& [name, n] : mg.nodes) os << "  \"" << dot_escape(name) << "\";\n";
  for (const auto& e : mg.edges) {
    os << "  \"" << dot_escape(e.source) << "\" -> \"" << dot_escape(e.target) << "\" [label=\""
       << e.weight << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const FeatureGraph& g) {
  std::ostringstream os;
  os << "digraph features {\n";
  for (const auto& [name, n] : g.nodes) os << "  \"" << dot_escape(name) << "\";\n";
  for (const auto& [key, w] : g.edges) {
    os << "  \"" << dot_escape(key.first) << "\" -> \"" << dot_escape(key.second) << "\" [label=\""
       << w << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_json(const FeatureMultigraph& mg) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : mg.edges) {
    edges.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight.str()}});
  }
  return nlohmann::json{{"nodes", nodes_json(mg.nodes)}, {"edges", edges}}.dump(2);
}

std::string to_json(const FeatureGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [key, w] : g.edges) {
    edges.push_back({{"source", key.first}, {"target", key.second}, {"weight", w.str()}});
  }
  return nlohmann::json{{"nodes", nodes_json(g.nodes)}, {"edges", edges}}.dump(2);
}

}  // namespace cfgrank
