#include <json.hpp>

#include "cfgrank/errors.hpp"
#include "cfgrank/frontend.hpp"

namespace cfgrank {

using nlohmann::json;

namespace {

json predicate_json(const CfgPredicate& p) {
  switch (p.kind) {
    case CfgPredicate::Kind::Single:
      return {{"single", p.name}};
    case CfgPredicate::Kind::Not:
      return {{"not", p.name}};
    case CfgPredicate::Kind::Any:
    case CfgPredicate::Kind::All: {
      json arr = json::array();
      for (const auto& c : p.children) arr.push_back(predicate_json(c));
      return {{p.kind == CfgPredicate::Kind::Any ? "any" : "all", arr}};
    }
  }
  return nullptr;
}

json node_json(const AstNode& n) {
  json cfg = json::array();
  for (const auto& p : n.attributes) cfg.push_back(predicate_json(p));
  json children = json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  return {{"kind", kind_name(n.kind)},
          {"ident", n.ident ? json(*n.ident) : json(nullptr)},
          {"cfg", cfg},
          {"span", {{"file", n.span.file}, {"start", n.span.start}, {"end", n.span.end}}},
          {"children", children}};
}

std::string ptr_join(const std::string& base, const std::string& token) {
  std::string esc;
  for (char c : token) {
    if (c == '~') esc += "~0";
    else if (c == '/') esc += "~1";
    else esc += c;
  }
  return base + "/" + esc;
}

CfgPredicate read_predicate(const json& j, const std::string& ptr) {
  if (!j.is_object() || j.size() != 1) {
    throw SchemaError(ptr, "predicate must be an object with exactly one key");
  }
  const std::string key = j.begin().key();
  const json& val = j.begin().value();
  std::string here = ptr_join(ptr, key);
  if (key == "single" || key == "not") {
    if (!val.is_string() || val.get<std::string>().empty()) {
      throw SchemaError(here, "expected non-empty feature name");
    }
    return key == "single" ? CfgPredicate::single(val.get<std::string>())
                           : CfgPredicate::negated(val.get<std::string>());
  }
  if (key == "any" || key == "all") {
    if (!val.is_array() || val.size() < 2) throw SchemaError(here, "expected array of >= 2 predicates");
    std::vector<CfgPredicate> cs;
    for (std::size_t i = 0; i < val.size(); ++i) {
      cs.push_back(read_predicate(val[i], ptr_join(here, std::to_string(i))));
    }
    return key == "any" ? CfgPredicate::any(std::move(cs)) : CfgPredicate::all(std::move(cs));
  }
  throw SchemaError(here, "unknown predicate connective '" + key + "'");
}

AstNode read_node(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "node must be an object");
  AstNode n;
  auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw SchemaError(ptr_join(ptr, "kind"), "missing string 'kind'");
  auto k = kind_from_name(kind->get<std::string>());
  if (!k) throw SchemaError(ptr_join(ptr, "kind"), "unknown kind '" + kind->get<std::string>() + "'");
  n.kind = *k;

  if (auto it = j.find("ident"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError(ptr_join(ptr, "ident"), "expected string or null");
    n.ident = it->get<std::string>();
  }
  if (auto it = j.find("cfg"); it != j.end()) {
    std::string here = ptr_join(ptr, "cfg");
    if (!it->is_array()) throw SchemaError(here, "expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      n.attributes.push_back(read_predicate((*it)[i], ptr_join(here, std::to_string(i))));
    }
  }
  if (auto it = j.find("span"); it != j.end()) {
    std::string here = ptr_join(ptr, "span");
    if (!it->is_object()) throw SchemaError(here, "expected object");
    auto field = [&](const char* name) -> const json& {
      auto f = it->find(name);
      if (f == it->end()) throw SchemaError(ptr_join(here, name), "missing field");
      return *f;
    };
    const json& file = field("file");
    const json& start = field("start");
    const json& end = field("end");
    if (!file.is_string()) throw SchemaError(ptr_join(here, "file"), "expected string");
    if (!start.is_number_integer()) throw SchemaError(ptr_join(here, "start"), "expected integer");
    if (!end.is_number_integer()) throw SchemaError(ptr_join(here, "end"), "expected integer");
    n.span = Span{file.get<std::string>(), start.get<int>(), end.get<int>()};
  }
  if (auto it = j.find("children"); it != j.end()) {
    std::string here = ptr_join(ptr, "children");
    if (!it->is_array()) throw SchemaError(here, "expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      n.children.push_back(read_node((*it)[i], ptr_join(here, std::to_string(i))));
    }
  }
  return n;
}

}  // namespace

std::string export_json_tree(const AstNode& root, int indent) { return node_json(root).dump(indent); }

AstNode ingest_json_tree(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return read_node(j, "");
}

}  // namespace cfgrank
