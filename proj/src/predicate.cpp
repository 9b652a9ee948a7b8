#include "cfgrank/predicate.hpp"

#include <cstddef>

#include "cfgrank/errors.hpp"
#include "lexer.hpp"

namespace cfgrank {

using detail::Tok;
using detail::Token;

std::string canonical_feature_name(std::string_view key, std::string_view value) {
  if (key == "feature") return std::string(value);
  return std::string(key) + "=" + std::string(value);
}

namespace {

void append_source(const CfgPredicate& p, std::string& out) {
  auto leaf = [&](const std::string& name) {
    auto eq = name.find('=');
    if (eq == std::string::npos) {
      out += "feature = \"" + name + "\"";
    } else {
      out += name.substr(0, eq) + " = \"" + name.substr(eq + 1) + "\"";
    }
  };
  switch (p.kind) {
    case CfgPredicate::Kind::Single:
      leaf(p.name);
      break;
    case CfgPredicate::Kind::Not:
      out += "not(";
      leaf(p.name);
      out += ")";
      break;
    case CfgPredicate::Kind::Any:
    case CfgPredicate::Kind::All:
      out += p.kind == CfgPredicate::Kind::Any ? "any(" : "all(";
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i) out += ", ";
        append_source(p.children[i], out);
      }
      out += ")";
      break;
  }
}

void append_key(const CfgPredicate& p, std::string& out) {
  switch (p.kind) {
    case CfgPredicate::Kind::Single:
      out += "+" + p.name;
      break;
    case CfgPredicate::Kind::Not:
      out += "!" + p.name;
      break;
    case CfgPredicate::Kind::Any:
    case CfgPredicate::Kind::All:
      out += p.kind == CfgPredicate::Kind::Any ? "any(" : "all(";
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i) out += ",";
        append_key(p.children[i], out);
      }
      out += ")";
      break;
  }
}

CfgPredicate negate(CfgPredicate p) {
  switch (p.kind) {
    case CfgPredicate::Kind::Single:
      return CfgPredicate::negated(std::move(p.name));
    case CfgPredicate::Kind::Not:
      return CfgPredicate::single(std::move(p.name));
    case CfgPredicate::Kind::Any:
    case CfgPredicate::Kind::All: {
      std::vector<CfgPredicate> cs;
      cs.reserve(p.children.size());
      for (auto& c : p.children) cs.push_back(negate(std::move(c)));
      return p.kind == CfgPredicate::Kind::Any ? CfgPredicate::all(std::move(cs))
                                               : CfgPredicate::any(std::move(cs));
    }
  }
  return p;
}

class PredicateParser {
 public:
  PredicateParser(const std::vector<Token>& toks, std::size_t pos, std::string path)
      : toks_(toks), pos_(pos), path_(std::move(path)) {}

  CfgPredicate parse() {
    const Token& t = cur();
    if (t.kind != Tok::Ident) fail("expected configuration name or any/all/not");
    std::string head = t.text;
    ++pos_;
    if ((head == "any" || head == "all" || head == "not") && cur().punct("(")) {
      ++pos_;
      std::vector<CfgPredicate> items;
      while (!cur().punct(")")) {
        items.push_back(parse());
        if (cur().punct(",")) {
          ++pos_;
        } else if (!cur().punct(")")) {
          fail("expected ',' or ')' in " + head + "(...)");
        }
      }
      ++pos_;
      if (head == "not") {
        if (items.size() != 1) fail("not(...) takes exactly one predicate");
        return negate(std::move(items.front()));
      }
      if (items.empty()) fail("empty " + head + "() is not supported");
      if (items.size() == 1) return std::move(items.front());
      return head == "any" ? CfgPredicate::any(std::move(items)) : CfgPredicate::all(std::move(items));
    }
    if (cur().punct("=")) {
      ++pos_;
      if (cur().kind != Tok::Str) fail("expected string literal after '='");
      std::string value = cur().text;
      ++pos_;
      if (value.empty()) fail("empty configuration value");
      return CfgPredicate::single(canonical_feature_name(head, value));
    }
    return CfgPredicate::single(head);
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(path_, cur().line, msg); }

  const Token& cur() const { return toks_[pos_]; }

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_;
  std::string path_;
};

}  // namespace

namespace detail {

// Shared with the source parser: parses one predicate starting at toks[pos].
CfgPredicate parse_predicate_tokens(const std::vector<Token>& toks, std::size_t& pos,
                                    const std::string& path) {
  PredicateParser p(toks, pos, path);
  CfgPredicate out = p.parse();
  pos = p.pos();
  return out;
}

}  // namespace detail

std::string to_source(const CfgPredicate& p) {
  std::string out;
  append_source(p, out);
  return out;
}

std::string canonical_key(const CfgPredicate& p) {
  std::string out;
  append_key(p, out);
  return out;
}

CfgPredicate parse_predicate(std::string_view text, const std::string& path, int line) {
  auto toks = detail::tokenize(text, line);
  std::size_t pos = 0;
  PredicateParser parser(toks, pos, path);
  CfgPredicate out = parser.parse();
  if (parser.cur().kind != Tok::End) parser.fail("trailing tokens after predicate");
  return out;
}

CfgPredicate to_binary(const CfgPredicate& p) {
  if (p.is_leaf()) return p;
  std::vector<CfgPredicate> cs;
  for (const auto& c : p.children) cs.push_back(to_binary(c));
  CfgPredicate acc = std::move(cs.back());
  for (std::size_t i = cs.size() - 1; i-- > 0;) {
    acc = CfgPredicate{p.kind, {}, {std::move(cs[i]), std::move(acc)}};
  }
  return acc;
}

std::vector<std::string> feature_occurrences(const CfgPredicate& p) {
  std::vector<std::string> out;
  auto walk = [&](const auto& self, const CfgPredicate& q) -> void {
    if (q.is_leaf()) {
      out.push_back(q.name);
      return;
    }
    for (const auto& c : q.children) self(self, c);
  };
  walk(walk, p);
  return out;
}

CfgPredicate conjoin(std::vector<CfgPredicate> ps) {
  if (ps.size() == 1) return std::move(ps.front());
  return CfgPredicate::all(std::move(ps));
}

}  // namespace cfgrank
