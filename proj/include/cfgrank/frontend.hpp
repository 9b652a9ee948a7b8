#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfgrank/predicate.hpp"

namespace cfgrank {

/// Syntactic category of an AST node. The string form (kind_name) is the
/// `kind` field of the JSON tree format.
enum class NodeKind {
  Root,
  Module,
  Function,
  Struct,
  Enum,
  Impl,
  Trait,
  ExternBlock,
  Const,
  Static,
  Let,
  ExprStmt,
  Call,
  Block,
  If,
  Match,
  Arm,
  Field,
  Variant,
  Macro,
  Use,
  ExternCrate,
  TypeAlias,
  Generics,
  Opaque,
};

std::string_view kind_name(NodeKind k);
std::optional<NodeKind> kind_from_name(std::string_view name);

struct Span {
  std::string file;
  int start = 0;
  int end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct AstNode {
  NodeKind kind = NodeKind::Opaque;
  std::optional<std::string> ident;
  std::vector<CfgPredicate> attributes;  // one entry per `#[cfg(...)]`, source order
  std::vector<AstNode> children;
  Span span;

  friend bool operator==(const AstNode&, const AstNode&) = default;
};

struct SourceFile {
  std::string path;
  std::string text;
};

/// Parses the supported Rust subset. Files named by `mod name;` declarations
/// are spliced under the declaring module; the remaining files become
/// top-level module children of the synthetic root, in input order.
AstNode parse_source(const std::vector<SourceFile>& files);

struct Manifest {
  std::string package_name;
  std::map<std::string, std::vector<std::string>> features;  // excludes `default`
  std::vector<std::string> default_features;
  std::set<std::string> implicit_features;  // referenced but never declared
  std::vector<std::string> workspace_members;

  /// Every feature name known to the manifest: declared, implicit, defaults.
  std::set<std::string> all_features() const;
};

Manifest parse_manifest(std::string_view text);

/// JSON tree format, see README. Export and ingest are inverse.
std::string export_json_tree(const AstNode& root, int indent = -1);
AstNode ingest_json_tree(std::string_view document);

}  // namespace cfgrank
