#include "cfgrank/uir.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cfgrank {

namespace {

WeightKind term_weight_kind(NodeKind k) {
  switch (k) {
    case NodeKind::Use:
    case NodeKind::ExternCrate:
    case NodeKind::TypeAlias:
    case NodeKind::Generics:
      return WeightKind::NoWeight;
    case NodeKind::Root:
    case NodeKind::Module:
    case NodeKind::Function:
    case NodeKind::Struct:
    case NodeKind::Enum:
    case NodeKind::Impl:
    case NodeKind::Trait:
    case NodeKind::ExternBlock:
    case NodeKind::Block:
    case NodeKind::If:
    case NodeKind::Match:
      return WeightKind::Children;
    case NodeKind::Call:
      return WeightKind::Reference;
    case NodeKind::Const:
    case NodeKind::Static:
    case NodeKind::Let:
    case NodeKind::ExprStmt:
    case NodeKind::Arm:
    case NodeKind::Field:
    case NodeKind::Variant:
    case NodeKind::Macro:
    case NodeKind::Opaque:
      return WeightKind::Intrinsic;
  }
  return WeightKind::Intrinsic;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) return std::numeric_limits<std::uint64_t>::max();
  return out;
}

void unify_into(const AstNode& ast, std::optional<NodeId> parent, Uir& out) {
  bool relevant = term_weight_kind(ast.kind) != WeightKind::NoWeight || !ast.attributes.empty();
  std::optional<NodeId> here = parent;
  if (relevant) {
    UirNode n;
    n.id = static_cast<NodeId>(out.nodes.size());
    n.term_kind = ast.kind;
    n.ident = ast.ident;
    n.span = ast.span;
    n.parent = parent;
    if (!ast.attributes.empty()) {
      n.variant = UirNode::Variant::Atom;
      n.predicate = conjoin(ast.attributes);
    }
    if (parent) out.nodes[*parent].children.push_back(n.id);
    here = n.id;
    out.nodes.push_back(std::move(n));
  }
  for (const auto& c : ast.children) unify_into(c, here, out);
}

// Algorithm state for compute_weights. The UIR is walked top-down through
// the children lists, which is the transpose of the child->parent edges.
class Weigher {
 public:
  Weigher(Uir& uir, std::uint64_t default_weight)
      : u_(uir), default_weight_(default_weight), queued_(uir.size(), false) {}

  void run() {
    u_.name_weights.clear();
    for (auto& n : u_.nodes) n.status = WeightStatus::Unweighted;
    if (u_.nodes.empty()) return;
    calc_weight(u_.root);
    resolve_queue();
    for (const auto& n : u_.nodes) {
      if (n.status != WeightStatus::Weighted) {
        throw std::logic_error("compute_weights left node " + std::to_string(n.id) + " unweighted");
      }
    }
  }

 private:
  void calc_weight(NodeId id) {
    for (NodeId c : u_[id].children) {
      if (u_[c].status != WeightStatus::Weighted) calc_weight(c);
    }
    evaluate(id);
  }

  // Computes `id` from its children, which must already be visited.
  void evaluate(NodeId id) {
    UirNode& n = u_[id];
    std::uint64_t children_weight = 0;
    for (NodeId c : n.children) {
      if (u_[c].status == WeightStatus::Wait) {
        n.status = WeightStatus::Wait;
        return;
      }
      children_weight = sat_add(children_weight, u_[c].weight);
    }
    switch (n.weight_kind) {
      case WeightKind::NoWeight:
        n.weight = 0;
        break;
      case WeightKind::Intrinsic:
        n.weight = sat_add(1, children_weight);
        break;
      case WeightKind::Children:
        n.weight = std::max<std::uint64_t>(1, children_weight);
        break;
      case WeightKind::Reference: {
        auto it = u_.name_weights.find(n.callee);
        if (it == u_.name_weights.end() || it->second.empty()) {
          n.status = WeightStatus::Wait;
          enqueue(id);
          return;
        }
        n.weight = round_half_up_mean(it->second);
        break;
      }
    }
    mark_weighted(n);
  }

  void mark_weighted(UirNode& n) {
    n.status = WeightStatus::Weighted;
    if (n.term_kind == NodeKind::Function && n.ident) u_.name_weights[*n.ident].push_back(n.weight);
  }

  static std::uint64_t round_half_up_mean(const std::vector<std::uint64_t>& ws) {
    unsigned __int128 sum = 0;
    for (auto w : ws) sum += w;
    unsigned __int128 k = ws.size();
    return static_cast<std::uint64_t>((2 * sum + k) / (2 * k));
  }

  void enqueue(NodeId id) {
    if (queued_[id]) return;
    queued_[id] = true;
    queue_.push_back(id);
  }

  // After `id` becomes weighted, re-evaluate waiting ancestors until one is
  // still blocked by another child.
  void settle(NodeId id) {
    auto p = u_[id].parent;
    while (p && u_[*p].status == WeightStatus::Wait) {
      evaluate(*p);
      if (u_[*p].status != WeightStatus::Weighted) return;
      p = u_[*p].parent;
    }
  }

  void resolve_queue() {
    // (node, queue length after dequeue) pairs; a repeat means a full pass
    // made no progress for this node, i.e. a reference cycle or a missing
    // definition.
    std::set<std::pair<NodeId, std::size_t>> seen;
    while (!queue_.empty()) {
      NodeId c = queue_.front();
      queue_.pop_front();
      queued_[c] = false;
      auto key = std::make_pair(c, queue_.size());
      if (seen.count(key)) {
        UirNode& n = u_[c];
        n.weight = default_weight_;
        mark_weighted(n);
        continue;
      }
      seen.insert(key);
      calc_weight(c);
      if (u_[c].status == WeightStatus::Wait) {
        enqueue(c);
      } else {
        settle(c);
      }
    }
    // Ancestors of recovered references are still waiting; parents precede
    // children in id order, so a reverse sweep finishes them.
    for (std::size_t i = u_.size(); i-- > 0;) {
      if (u_.nodes[i].status == WeightStatus::Wait) evaluate(static_cast<NodeId>(i));
    }
  }

  Uir& u_;
  std::uint64_t default_weight_;
  std::deque<NodeId> queue_;
  std::vector<bool> queued_;
};

}  // namespace

const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::NoWeight:
      return "none";
    case WeightKind::Intrinsic:
      return "intrinsic";
    case WeightKind::Children:
      return "children";
    case WeightKind::Reference:
      return "reference";
  }
  return "?";
}

std::vector<std::pair<NodeId, NodeId>> Uir::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& n : nodes) {
    if (n.parent) out.emplace_back(n.id, *n.parent);
  }
  return out;
}

std::optional<NodeId> Uir::nearest_atom_ancestor(NodeId id) const {
  auto p = nodes[id].parent;
  while (p && !nodes[*p].is_atom()) p = nodes[*p].parent;
  return p;
}

Uir unify(const AstNode& ast) {
  Uir out;
  UirNode g;
  g.id = 0;
  g.variant = UirNode::Variant::Atom;
  g.term_kind = NodeKind::Root;
  g.span = ast.span;
  out.nodes.push_back(std::move(g));
  out.root = 0;
  // A root node's own attributes are not representable; its children hang
  // off G directly.
  for (const auto& c : ast.children) unify_into(c, NodeId{0}, out);
  return out;
}

void assign_weight_kinds(Uir& uir) {
  for (auto& n : uir.nodes) {
    n.weight_kind = term_weight_kind(n.term_kind);
    n.callee = n.weight_kind == WeightKind::Reference ? n.ident.value_or("") : std::string{};
  }
  uir.nodes[uir.root].weight_kind = WeightKind::Children;
}

void compute_weights(Uir& uir, std::uint64_t default_weight) {
  if (default_weight == 0) throw std::invalid_argument("default weight must be positive");
  Weigher(uir, default_weight).run();
}

Uir build_uir(const AstNode& ast, std::uint64_t default_weight) {
  Uir u = unify(ast);
  assign_weight_kinds(u);
  compute_weights(u, default_weight);
  return u;
}

UirMetrics uir_metrics(const Uir& uir) {
  UirMetrics m;
  m.nodes = uir.size();
  std::vector<std::size_t> depth(uir.size(), 0);
  for (const auto& n : uir.nodes) {
    if (!n.parent) continue;
    ++m.edges;
    depth[n.id] = depth[*n.parent] + 1;  // parents precede children
    m.height = std::max(m.height, depth[n.id]);
  }
  return m;
}

std::string uir_to_dot(const Uir& uir) {
  std::ostringstream os;
  os << "digraph uir {\n  node [shape=box];\n";
  for (const auto& n : uir.nodes) {
    os << "  n" << n.id << " [label=\"" << n.id << " " << kind_name(n.term_kind);
    if (n.ident) os << " " << *n.ident;
    if (n.predicate) {
      std::string src = to_source(*n.predicate);
      std::string esc;
      for (char c : src) {
        if (c == '"') esc += '\\';
        esc += c;
      }
      os << "\\n#[cfg(" << esc << ")]";
    }
    os << "\\n" << weight_kind_name(n.weight_kind) << " w=" << n.weight << "\"";
    if (n.is_atom()) os << ", style=filled, fillcolor=lightblue";
    os << "];\n";
  }
  for (const auto& [c, p] : uir.edges()) os << "  n" << c << " -> n" << p << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace cfgrank
