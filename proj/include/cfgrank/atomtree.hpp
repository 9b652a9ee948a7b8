#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfgrank/centrality.hpp"
#include "cfgrank/uir.hpp"

namespace cfgrank {

/// Atom-only view of a UIR. Node ids are UIR ids; G (the root) is kept as an
/// edge target but carries no predicate.
struct AtomTree {
  std::vector<NodeId> nodes;                       // ascending UIR id, includes G
  std::vector<std::pair<NodeId, NodeId>> edges;    // atom -> parent atom
  std::map<NodeId, std::uint64_t> weights;         // w_A
  std::map<NodeId, CfgPredicate> predicates;       // absent for G
  NodeId root = 0;
};

AtomTree extract_atom_tree(const Uir& uir);

/// Adds normalized atom weights onto the vector; returns a new vector.
CentralityVector refine(const CentralityVector& v, const AtomTree& t);

struct AtomTreeMetrics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  friend bool operator==(const AtomTreeMetrics&, const AtomTreeMetrics&) = default;
};

/// Counts exclude the predicate-free root.
AtomTreeMetrics atomtree_metrics(const AtomTree& t);

std::string to_dot(const AtomTree& t);
std::string to_json(const AtomTree& t);

}  // namespace cfgrank
