#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfgrank/frontend.hpp"
#include "cfgrank/predicate.hpp"

namespace cfgrank {

using NodeId = std::uint32_t;

enum class WeightKind { NoWeight, Intrinsic, Children, Reference };
enum class WeightStatus { Unweighted, Wait, Weighted };

const char* weight_kind_name(WeightKind k);

/// One UIR node: either an atom (a term unified with its `cfg` predicate) or
/// a plain relevant term. The synthetic global scope G is the only atom
/// without a predicate.
struct UirNode {
  enum class Variant { Atom, Plain };

  NodeId id = 0;
  Variant variant = Variant::Plain;
  std::optional<CfgPredicate> predicate;  // set for every atom except G
  NodeKind term_kind = NodeKind::Opaque;
  std::optional<std::string> ident;
  Span span;

  WeightKind weight_kind = WeightKind::Intrinsic;
  std::string callee;  // Reference only
  std::uint64_t weight = 0;
  WeightStatus status = WeightStatus::Unweighted;

  std::optional<NodeId> parent;   // the single outgoing child->parent edge
  std::vector<NodeId> children;   // transpose view, source order

  bool is_atom() const { return variant == Variant::Atom; }
};

/// Unified intermediate representation. Node ids are dense and assigned in
/// pre-order, so the root is 0 and every parent id is smaller than its
/// children's ids.
struct Uir {
  std::vector<UirNode> nodes;
  NodeId root = 0;
  /// identifier -> weights of every same-named definition
  std::map<std::string, std::vector<std::uint64_t>> name_weights;

  const UirNode& operator[](NodeId id) const { return nodes[id]; }
  UirNode& operator[](NodeId id) { return nodes[id]; }
  std::size_t size() const { return nodes.size(); }

  /// child -> parent pairs in child-id order
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  /// Nearest proper ancestor that is an atom; nullopt for the root.
  std::optional<NodeId> nearest_atom_ancestor(NodeId id) const;
};

/// Unifies `cfg` attributes with their terms and reverses tree edges.
/// Irrelevant attribute-free nodes are dropped and their children reattach
/// to the nearest retained ancestor.
Uir unify(const AstNode& ast);

/// Tags every node with the weight kind of its term.
void assign_weight_kinds(Uir& uir);

/// Fixed-point weighting with wait-queue resolution and cycle recovery.
/// Every node ends Weighted.
void compute_weights(Uir& uir, std::uint64_t default_weight = 1);

/// Convenience: unify + assign_weight_kinds + compute_weights.
Uir build_uir(const AstNode& ast, std::uint64_t default_weight = 1);

struct UirMetrics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t height = 0;
  friend bool operator==(const UirMetrics&, const UirMetrics&) = default;
};

UirMetrics uir_metrics(const Uir& uir);

std::string uir_to_dot(const Uir& uir);

}  // namespace cfgrank
