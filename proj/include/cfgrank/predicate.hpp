#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cfgrank {

/// A `cfg` configuration predicate. Single/Not carry a canonical feature
/// name; Any/All carry at least two children, stored n-ary in source order.
struct CfgPredicate {
  enum class Kind { Single, Not, Any, All };

  Kind kind = Kind::Single;
  std::string name;                   // Single / Not
  std::vector<CfgPredicate> children;  // Any / All

  static CfgPredicate single(std::string n) { return {Kind::Single, std::move(n), {}}; }
  static CfgPredicate negated(std::string n) { return {Kind::Not, std::move(n), {}}; }
  static CfgPredicate any(std::vector<CfgPredicate> cs) { return {Kind::Any, {}, std::move(cs)}; }
  static CfgPredicate all(std::vector<CfgPredicate> cs) { return {Kind::All, {}, std::move(cs)}; }

  bool is_leaf() const { return kind == Kind::Single || kind == Kind::Not; }

  friend bool operator==(const CfgPredicate&, const CfgPredicate&) = default;
};

/// Rust source syntax, e.g. `any(feature = "b", feature = "c")`. Parsing the
/// result with parse_predicate yields an equal value.
std::string to_source(const CfgPredicate& p);

/// Compact, unambiguous key used for syntactic dedup and ordering.
std::string canonical_key(const CfgPredicate& p);

/// Parses the text between the parentheses of `cfg(...)`. Throws
/// SyntaxError(path, line, ...) on malformed input.
CfgPredicate parse_predicate(std::string_view text, const std::string& path = "<predicate>",
                             int line = 1);

/// Right-folded binary view: any(a, b, c) -> any(a, any(b, c)).
CfgPredicate to_binary(const CfgPredicate& p);

/// Feature names in occurrence order (duplicates kept).
std::vector<std::string> feature_occurrences(const CfgPredicate& p);

/// Conjoins a list of predicates in order; one element is returned as is.
CfgPredicate conjoin(std::vector<CfgPredicate> ps);

/// Normalizes `key = "value"` config options: `feature = "x"` becomes `x`,
/// other keys become `key=value`; bare names are returned unchanged.
std::string canonical_feature_name(std::string_view key, std::string_view value);

}  // namespace cfgrank
