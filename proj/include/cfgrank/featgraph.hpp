#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfgrank/predicate.hpp"
#include "cfgrank/rational.hpp"
#include "cfgrank/uir.hpp"

namespace cfgrank {

inline constexpr const char* kGlobalNode = "G";
inline constexpr const char* kPatchNode = "PATCH";

inline bool is_reserved_node(const std::string& name) {
  return name == kGlobalNode || name == kPatchNode;
}

struct FeatureNode {
  std::string name;
  std::vector<CfgPredicate> predicates;  // every occurrence, in discovery order
};

struct FeatureEdge {
  std::string source;
  std::string target;
  Rational weight;
  friend bool operator==(const FeatureEdge&, const FeatureEdge&) = default;
};

struct FeatureMultigraph {
  std::map<std::string, FeatureNode> nodes;
  std::vector<FeatureEdge> edges;  // multiset, insertion order
};

struct FeatureGraph {
  std::map<std::string, FeatureNode> nodes;
  std::map<std::pair<std::string, std::string>, Rational> edges;

  bool has_node(const std::string& n) const { return nodes.count(n) > 0; }
  /// Aggregated weight, or 0 when the edge is absent.
  Rational weight(const std::string& from, const std::string& to) const;
};

/// How an `all(...)` predicate splits its incoming weight.
enum class ChiMode {
  /// Divide by the feature count of the whole `all` predicate: all(c, d)
  /// yields 1/2 per feature.
  FeatureCount,
  /// Literal reading d = (w * |features(child)|)^-1 per child.
  Formula,
};

/// Per-feature edge weights contributed by one predicate; duplicates kept.
std::vector<std::pair<std::string, Rational>> chi(const CfgPredicate& p, const Rational& w,
                                                  ChiMode mode = ChiMode::FeatureCount);

FeatureMultigraph extract_feature_graph(const Uir& uir, ChiMode mode = ChiMode::FeatureCount);

FeatureGraph squash(const FeatureMultigraph& mg);

/// Adds PATCH with G -> PATCH and PATCH -> x for every other node, all weight 1.
FeatureGraph add_patch_node(FeatureGraph g);

std::string to_dot(const FeatureMultigraph& mg);
std::string to_dot(const FeatureGraph& g);
std::string to_json(const FeatureMultigraph& mg);
std::string to_json(const FeatureGraph& g);

}  // namespace cfgrank
