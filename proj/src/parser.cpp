// Recursive-descent reader for the supported Rust subset. Only the
// structure the analysis needs is recovered: items, statements, calls and
// the control-flow skeleton. Everything else is skipped token-wise, so any
// well-nested input parses; only malformed `cfg(...)` predicates are errors.

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "cfgrank/errors.hpp"
#include "cfgrank/frontend.hpp"
#include "lexer.hpp"

namespace cfgrank {

namespace detail {
CfgPredicate parse_predicate_tokens(const std::vector<Token>& toks, std::size_t& pos,
                                    const std::string& path);
}

namespace {

using detail::Tok;
using detail::Token;

constexpr std::array<std::string_view, 25> kKindNames = {
    "root",  "mod",   "fn",    "struct",  "enum",         "impl",   "trait",    "extern_block",
    "const", "static", "let",  "expr",    "call",         "block",  "if",       "match",
    "arm",   "field", "variant", "macro", "use",          "extern_crate", "type", "generics",
    "item"};

// Identifiers that may precede `(` without forming a call.
const std::set<std::string, std::less<>> kNonCallKeywords = {
    "return", "in", "as", "let", "mut", "ref", "move", "break", "continue", "yield", "else",
    "box", "await", "where", "dyn", "impl", "fn", "if", "match", "while", "for", "loop", "unsafe",
    "async", "const", "static", "struct", "enum", "type", "use", "mod", "pub", "crate", "super",
    "self", "Fn", "FnMut", "FnOnce"};

struct ExternalMod {
  int line;
  std::string name;
  std::vector<std::string> inline_prefix;  // enclosing inline `mod x { }` names
};

class SourceParser {
 public:
  SourceParser(std::string path, std::string_view text)
      : path_(std::move(path)), toks_(detail::tokenize(text)) {}

  std::vector<AstNode> parse_file() { return parse_items(false); }

  const std::vector<ExternalMod>& external_mods() const { return external_; }

 private:
  const Token& tok(std::size_t i) const { return i < toks_.size() ? toks_[i] : toks_.back(); }
  const Token& cur() const { return tok(pos_); }
  bool at_end() const { return cur().kind == Tok::End; }
  int prev_line() const { return pos_ > 0 ? tok(pos_ - 1).line : tok(0).line; }
  void bump() {
    if (!at_end()) ++pos_;
  }

  static bool is_open(const Token& t) { return t.punct("(") || t.punct("[") || t.punct("{"); }
  static bool is_close(const Token& t) { return t.punct(")") || t.punct("]") || t.punct("}"); }

  // Index just past the group opened at `i`.
  std::size_t skip_group_from(std::size_t i) const {
    int depth = 0;
    for (; tok(i).kind != Tok::End; ++i) {
      if (is_open(tok(i))) ++depth;
      if (is_close(tok(i)) && --depth == 0) return i + 1;
    }
    return i;
  }
  void skip_group() { pos_ = skip_group_from(pos_); }

  void skip_angles() {
    int depth = 0;
    while (!at_end()) {
      if (cur().punct("<")) ++depth;
      else if (cur().punct(">")) --depth;
      else if (is_open(cur())) {
        skip_group();
        continue;
      } else if (is_close(cur()) || cur().punct(";")) {
        return;
      }
      bump();
      if (depth <= 0) return;
    }
  }

  // Advances to the first depth-0 token matching `stop` without consuming it.
  // Angle brackets count as nesting when `angles` is set (type contexts).
  template <class Pred>
  void skip_until(Pred stop, bool angles) {
    int angle = 0;
    while (!at_end()) {
      const Token& t = cur();
      if (angle == 0 && stop(t)) return;
      if (is_close(t)) return;
      if (is_open(t)) {
        skip_group();
        continue;
      }
      if (angles && t.punct("<")) ++angle;
      if (angles && t.punct(">") && angle > 0) --angle;
      bump();
    }
  }

  // ---- attributes -------------------------------------------------------

  std::vector<CfgPredicate> parse_outer_attrs() {
    std::vector<CfgPredicate> out;
    while (cur().punct("#")) {
      if (tok(pos_ + 1).punct("!") && tok(pos_ + 2).punct("[")) {
        pos_ = skip_group_from(pos_ + 2);
        continue;
      }
      if (!tok(pos_ + 1).punct("[")) break;
      std::size_t open = pos_ + 1;
      if (tok(open + 1).ident("cfg") && tok(open + 2).punct("(")) {
        std::size_t p = open + 3;
        out.push_back(detail::parse_predicate_tokens(toks_, p, path_));
        if (tok(p).punct(",")) ++p;
        if (!tok(p).punct(")")) throw SyntaxError(path_, tok(p).line, "expected ')' closing cfg");
        if (!tok(p + 1).punct("]")) throw SyntaxError(path_, tok(p + 1).line, "expected ']' closing attribute");
        pos_ = p + 2;
      } else {
        pos_ = skip_group_from(open);
      }
    }
    return out;
  }

  // ---- items ------------------------------------------------------------

  static bool item_keyword(const Token& t) {
    static const std::set<std::string, std::less<>> kw = {"fn",  "struct", "enum",   "impl",
                                                          "trait", "mod",  "static", "use",
                                                          "type", "extern", "const", "union"};
    return t.kind == Tok::Ident && kw.count(t.text) > 0;
  }

  // Index of the item keyword if an item starts at pos_, skipping
  // visibility and qualifiers.
  std::optional<std::size_t> item_head() const {
    std::size_t i = pos_;
    if (tok(i).ident("pub")) {
      ++i;
      if (tok(i).punct("(")) i = skip_group_from(i);
    }
    while (true) {
      const Token& t = tok(i);
      const Token& n = tok(i + 1);
      if (t.ident("default") && item_keyword(n)) {
        ++i;
      } else if ((t.ident("async") || t.ident("unsafe")) && item_keyword(n)) {
        ++i;
      } else if (t.ident("const") &&
                 (n.ident("fn") || n.ident("unsafe") || n.ident("async") || n.ident("extern"))) {
        ++i;
      } else if (t.ident("extern")) {
        if (n.ident("crate") || n.punct("{")) return i;
        if (n.ident("fn")) {
          ++i;
        } else if (n.kind == Tok::Str && tok(i + 2).ident("fn")) {
          i += 2;
        } else if (n.kind == Tok::Str && tok(i + 2).punct("{")) {
          return i;
        } else {
          return std::nullopt;
        }
      } else if (t.ident("auto") && n.ident("trait")) {
        ++i;
      } else {
        break;
      }
    }
    const Token& t = tok(i);
    const Token& n = tok(i + 1);
    if (t.kind != Tok::Ident) return std::nullopt;
    if (t.ident("fn") || t.ident("struct") || t.ident("enum") || t.ident("impl") ||
        t.ident("trait") || t.ident("mod") || t.ident("use") || t.ident("type")) {
      return i;
    }
    if (t.ident("union") && n.kind == Tok::Ident) return i;
    if (t.ident("static") && (n.kind == Tok::Ident && !n.ident("move"))) return i;
    if (t.ident("const") && (n.kind == Tok::Ident || n.punct("_"))) return i;
    if (t.ident("macro_rules") && n.punct("!")) return i;
    return std::nullopt;
  }

  AstNode make(NodeKind kind, int start_line) const {
    AstNode n;
    n.kind = kind;
    n.span = Span{path_, start_line, start_line};
    return n;
  }
  void finish(AstNode& n) const { n.span.end = std::max(n.span.start, prev_line()); }

  std::optional<std::string> take_ident() {
    if (cur().kind == Tok::Ident || cur().punct("_")) {
      std::string s = cur().text;
      bump();
      return s;
    }
    return std::nullopt;
  }

  std::vector<AstNode> parse_items(bool braced) {
    std::vector<AstNode> items;
    if (braced) bump();  // '{'
    while (!at_end()) {
      if (cur().punct("}")) {
        if (braced) break;
        bump();
        continue;
      }
      if (cur().punct(";") || cur().punct(")") || cur().punct("]")) {
        bump();
        continue;
      }
      auto attrs = parse_outer_attrs();
      if (at_end() || cur().punct("}")) break;
      AstNode item = parse_item_or_opaque();
      item.attributes = std::move(attrs);
      items.push_back(std::move(item));
    }
    if (braced && cur().punct("}")) bump();
    return items;
  }

  AstNode parse_item_or_opaque() {
    if (auto head = item_head()) return parse_item(*head);
    int line = cur().line;
    if (auto mac = try_macro()) {
      if (cur().punct(";")) bump();
      return std::move(*mac);
    }
    AstNode n = make(NodeKind::Opaque, line);
    std::size_t start = pos_;
    skip_until([](const Token& t) { return t.punct(";") || t.punct("{"); }, false);
    if (cur().punct("{")) {
      skip_group();
    } else if (cur().punct(";") || pos_ == start) {
      bump();
    }
    finish(n);
    return n;
  }

  AstNode parse_generics() {
    AstNode g = make(NodeKind::Generics, cur().line);
    skip_angles();
    finish(g);
    return g;
  }

  AstNode parse_item(std::size_t head) {
    int line = cur().line;
    pos_ = head;
    const std::string kw = cur().text;
    bump();

    if (kw == "fn") {
      AstNode n = make(NodeKind::Function, line);
      n.ident = take_ident();
      if (cur().punct("<")) n.children.push_back(parse_generics());
      skip_until([](const Token& t) { return t.punct("{") || t.punct(";"); }, false);
      if (cur().punct("{")) {
        n.children.push_back(parse_block());
      } else if (cur().punct(";")) {
        bump();
      }
      finish(n);
      return n;
    }
    if (kw == "struct" || kw == "union") {
      AstNode n = make(NodeKind::Struct, line);
      n.ident = take_ident();
      if (cur().punct("<")) n.children.push_back(parse_generics());
      skip_until([](const Token& t) { return t.punct("{") || t.punct("(") || t.punct(";"); }, true);
      if (cur().punct("(")) {
        parse_fields(n, true);
        skip_until([](const Token& t) { return t.punct(";"); }, true);
        if (cur().punct(";")) bump();
      } else if (cur().punct("{")) {
        parse_fields(n, false);
      } else if (cur().punct(";")) {
        bump();
      }
      finish(n);
      return n;
    }
    if (kw == "enum") {
      AstNode n = make(NodeKind::Enum, line);
      n.ident = take_ident();
      if (cur().punct("<")) n.children.push_back(parse_generics());
      skip_until([](const Token& t) { return t.punct("{"); }, true);
      if (cur().punct("{")) parse_variants(n);
      finish(n);
      return n;
    }
    if (kw == "impl" || kw == "trait") {
      AstNode n = make(kw == "impl" ? NodeKind::Impl : NodeKind::Trait, line);
      if (kw == "trait") n.ident = take_ident();
      if (cur().punct("<")) n.children.push_back(parse_generics());
      skip_until([](const Token& t) { return t.punct("{") || t.punct(";"); }, true);
      if (cur().punct("{")) {
        for (auto& c : parse_items(true)) n.children.push_back(std::move(c));
      } else if (cur().punct(";")) {
        bump();
      }
      finish(n);
      return n;
    }
    if (kw == "mod") {
      AstNode n = make(NodeKind::Module, line);
      n.ident = take_ident();
      if (cur().punct(";")) {
        bump();
        external_.push_back({line, n.ident.value_or(""), inline_prefix_});
      } else if (cur().punct("{")) {
        inline_prefix_.push_back(n.ident.value_or(""));
        n.children = parse_items(true);
        inline_prefix_.pop_back();
      }
      finish(n);
      return n;
    }
    if (kw == "const" || kw == "static") {
      AstNode n = make(kw == "const" ? NodeKind::Const : NodeKind::Static, line);
      if (cur().ident("mut")) bump();
      n.ident = take_ident();
      skip_until([](const Token& t) { return t.punct("=") || t.punct(";"); }, true);
      if (cur().punct("=")) {
        bump();
        n.children = scan([](const Token& t) { return t.punct(";"); });
      }
      if (cur().punct(";")) bump();
      finish(n);
      return n;
    }
    if (kw == "use" || kw == "type") {
      AstNode n = make(kw == "use" ? NodeKind::Use : NodeKind::TypeAlias, line);
      if (kw == "type") n.ident = take_ident();
      skip_until([](const Token& t) { return t.punct(";"); }, kw == "type");
      if (cur().punct(";")) bump();
      finish(n);
      return n;
    }
    if (kw == "extern") {
      if (cur().ident("crate")) {
        AstNode n = make(NodeKind::ExternCrate, line);
        bump();
        n.ident = take_ident();
        skip_until([](const Token& t) { return t.punct(";"); }, false);
        if (cur().punct(";")) bump();
        finish(n);
        return n;
      }
      AstNode n = make(NodeKind::ExternBlock, line);
      if (cur().kind == Tok::Str) bump();
      if (cur().punct("{")) n.children = parse_items(true);
      finish(n);
      return n;
    }
    if (kw == "macro_rules") {
      AstNode n = make(NodeKind::Macro, line);
      bump();  // '!'
      n.ident = take_ident();
      if (is_open(cur())) skip_group();
      if (cur().punct(";")) bump();
      finish(n);
      return n;
    }
    AstNode n = make(NodeKind::Opaque, line);
    finish(n);
    return n;
  }

  void parse_fields(AstNode& owner, bool tuple) {
    const char* close = tuple ? ")" : "}";
    bump();  // opener
    int index = 0;
    while (!at_end() && !cur().punct(close)) {
      auto attrs = parse_outer_attrs();
      if (at_end() || cur().punct(close)) break;
      AstNode f = make(NodeKind::Field, cur().line);
      f.attributes = std::move(attrs);
      if (cur().ident("pub")) {
        bump();
        if (cur().punct("(")) skip_group();
      }
      if (tuple) {
        f.ident = std::to_string(index);
      } else {
        f.ident = take_ident();
      }
      ++index;
      skip_until([](const Token& t) { return t.punct(","); }, true);
      finish(f);
      owner.children.push_back(std::move(f));
      if (cur().punct(",")) bump();
      else if (!cur().punct(close)) bump();
    }
    if (cur().punct(close)) bump();
  }

  void parse_variants(AstNode& owner) {
    bump();  // '{'
    while (!at_end() && !cur().punct("}")) {
      auto attrs = parse_outer_attrs();
      if (at_end() || cur().punct("}")) break;
      AstNode v = make(NodeKind::Variant, cur().line);
      v.attributes = std::move(attrs);
      v.ident = take_ident();
      skip_until([](const Token& t) { return t.punct(","); }, false);
      finish(v);
      owner.children.push_back(std::move(v));
      if (cur().punct(",")) bump();
      else if (!cur().punct("}")) bump();
    }
    if (cur().punct("}")) bump();
  }

  // ---- statements and expressions ---------------------------------------

  AstNode parse_block() {
    AstNode b = make(NodeKind::Block, cur().line);
    if (!cur().punct("{")) {
      finish(b);
      return b;
    }
    bump();
    while (!at_end() && !cur().punct("}")) {
      if (cur().punct(";")) {
        bump();
        continue;
      }
      if (cur().punct(")") || cur().punct("]")) {
        bump();
        continue;
      }
      auto attrs = parse_outer_attrs();
      if (at_end() || cur().punct("}")) break;
      AstNode stmt = parse_statement();
      stmt.attributes = std::move(attrs);
      b.children.push_back(std::move(stmt));
    }
    if (cur().punct("}")) bump();
    finish(b);
    return b;
  }

  static bool stmt_end(const Token& t) { return t.punct(";"); }

  AstNode parse_statement() {
    int line = cur().line;
    if (cur().ident("let")) {
      AstNode n = make(NodeKind::Let, line);
      bump();
      n.children = scan(stmt_end);
      if (cur().punct(";")) bump();
      finish(n);
      return n;
    }
    if (auto head = item_head()) return parse_item(*head);

    std::size_t save = pos_;
    if (auto mac = try_macro()) {
      if (cur().punct(";") || cur().punct("}")) {
        if (cur().punct(";")) bump();
        return std::move(*mac);
      }
      pos_ = save;
    }

    if (auto construct = try_block_like()) {
      const Token& t = cur();
      if (!(t.punct(".") || t.punct("?") || t.ident("as"))) {
        if (cur().punct(";")) bump();
        return std::move(*construct);
      }
      AstNode n = make(NodeKind::ExprStmt, line);
      n.children.push_back(std::move(*construct));
      for (auto& c : scan(stmt_end)) n.children.push_back(std::move(c));
      if (cur().punct(";")) bump();
      finish(n);
      return n;
    }

    AstNode n = make(NodeKind::ExprStmt, line);
    n.children = scan(stmt_end);
    if (cur().punct(";")) bump();
    finish(n);
    return n;
  }

  // `if`, `match`, loops, and bare/unsafe/async/const blocks.
  std::optional<AstNode> try_block_like() {
    if (cur().kind == Tok::Lifetime && tok(pos_ + 1).punct(":")) pos_ += 2;
    const Token& t = cur();
    if (t.ident("if")) return parse_if();
    if (t.ident("match")) return parse_match();
    if (t.ident("loop") || t.ident("while") || t.ident("for")) return parse_loop();
    if ((t.ident("unsafe") || t.ident("const")) && tok(pos_ + 1).punct("{")) {
      bump();
      return parse_block();
    }
    if (t.ident("async")) {
      std::size_t i = pos_ + 1;
      if (tok(i).ident("move")) ++i;
      if (tok(i).punct("{")) {
        pos_ = i;
        return parse_block();
      }
    }
    if (t.punct("{")) return parse_block();
    return std::nullopt;
  }

  AstNode parse_if() {
    AstNode n = make(NodeKind::If, cur().line);
    bump();  // if
    n.children = scan([](const Token& t) { return t.punct("{"); });
    n.children.push_back(parse_block());
    if (cur().ident("else")) {
      bump();
      if (cur().ident("if")) {
        n.children.push_back(parse_if());
      } else {
        n.children.push_back(parse_block());
      }
    }
    finish(n);
    return n;
  }

  AstNode parse_loop() {
    AstNode n = make(NodeKind::Block, cur().line);
    bump();  // loop / while / for
    n.children = scan([](const Token& t) { return t.punct("{"); });
    n.children.push_back(parse_block());
    finish(n);
    return n;
  }

  AstNode parse_match() {
    AstNode n = make(NodeKind::Match, cur().line);
    bump();  // match
    n.children = scan([](const Token& t) { return t.punct("{"); });
    if (!cur().punct("{")) {
      finish(n);
      return n;
    }
    bump();
    while (!at_end() && !cur().punct("}")) {
      if (cur().punct(",")) {
        bump();
        continue;
      }
      auto attrs = parse_outer_attrs();
      if (at_end() || cur().punct("}")) break;
      AstNode arm = make(NodeKind::Arm, cur().line);
      arm.attributes = std::move(attrs);
      // pattern: no structures, only skipped
      skip_until([](const Token& t) { return t.ident("if") || t.punct("=>"); }, false);
      if (cur().ident("if")) {
        bump();
        arm.children = scan([](const Token& t) { return t.punct("=>"); });
      }
      if (cur().punct("=>")) bump();
      if (cur().punct("{")) {
        arm.children.push_back(parse_block());
      } else {
        for (auto& c : scan([](const Token& t) { return t.punct(","); })) {
          arm.children.push_back(std::move(c));
        }
      }
      if (cur().punct(",")) bump();
      finish(arm);
      n.children.push_back(std::move(arm));
      if (is_close(cur()) && !cur().punct("}")) bump();
    }
    if (cur().punct("}")) bump();
    finish(n);
    return n;
  }

  // Parses `path::to::name!(...)` at pos_; restores pos_ when absent.
  std::optional<AstNode> try_macro() {
    std::size_t i = pos_;
    if (tok(i).punct("::")) ++i;
    if (tok(i).kind != Tok::Ident) return std::nullopt;
    std::string name = tok(i).text;
    ++i;
    while (tok(i).punct("::") && tok(i + 1).kind == Tok::Ident) {
      name = tok(i + 1).text;
      i += 2;
    }
    if (!tok(i).punct("!") || !is_open(tok(i + 1))) return std::nullopt;
    AstNode m = make(NodeKind::Macro, tok(pos_).line);
    m.ident = name;
    pos_ = skip_group_from(i + 1);
    finish(m);
    return m;
  }

  // Scans an expression up to a depth-0 token accepted by `stop` (not
  // consumed) or an unmatched closer, collecting the structures inside.
  using Stop = std::function<bool(const Token&)>;

  std::vector<AstNode> scan(const Stop& stop) {
    std::vector<AstNode> out;
    while (!at_end()) {
      const Token& t = cur();
      if (stop(t) || is_close(t)) break;

      if (t.punct("#") && tok(pos_ + 1).punct("[")) {
        pos_ = skip_group_from(pos_ + 1);
        continue;
      }
      if (t.kind == Tok::Lifetime && tok(pos_ + 1).punct(":")) {
        pos_ += 2;
        continue;
      }
      if (auto b = try_block_like()) {
        out.push_back(std::move(*b));
        continue;
      }
      if (t.punct("(") || t.punct("[")) {
        std::string close = t.punct("(") ? ")" : "]";
        bump();
        for (auto& c : scan([](const Token&) { return false; })) out.push_back(std::move(c));
        if (cur().text == close) bump();
        continue;
      }
      if (t.punct(".") && tok(pos_ + 1).kind == Tok::Ident) {
        std::size_t i = pos_ + 2;
        if (tok(i).punct("::") && tok(i + 1).punct("<")) {
          std::size_t save = pos_;
          pos_ = i + 1;
          skip_angles();
          i = pos_;
          pos_ = save;
        }
        if (tok(i).punct("(")) {
          AstNode call = make(NodeKind::Call, t.line);
          call.ident = tok(pos_ + 1).text;
          pos_ = i;
          parse_args(call);
          out.push_back(std::move(call));
          continue;
        }
        pos_ += 2;
        continue;
      }
      if (t.kind == Tok::Ident || t.punct("::")) {
        if (auto mac = try_macro()) {
          out.push_back(std::move(*mac));
          continue;
        }
        if (auto call = try_path_call()) out.push_back(std::move(*call));
        continue;
      }
      bump();
    }
    return out;
  }

  // Always consumes at least one token.
  std::optional<AstNode> try_path_call() {
    std::size_t i = pos_;
    if (tok(i).punct("::")) ++i;
    if (tok(i).kind != Tok::Ident) {
      pos_ = i;
      return std::nullopt;
    }
    if (kNonCallKeywords.count(tok(i).text) && !tok(i + 1).punct("::")) {
      ++pos_;
      return std::nullopt;
    }
    std::string name = tok(i).text;
    int line = tok(i).line;
    ++i;
    while (tok(i).punct("::")) {
      if (tok(i + 1).kind == Tok::Ident) {
        name = tok(i + 1).text;
        i += 2;
      } else if (tok(i + 1).punct("<")) {
        std::size_t save = pos_;
        pos_ = i + 1;
        skip_angles();
        i = pos_;
        pos_ = save;
      } else {
        break;
      }
    }
    if (!tok(i).punct("(") || kNonCallKeywords.count(name)) {
      pos_ = i;
      return std::nullopt;
    }
    AstNode call = make(NodeKind::Call, line);
    call.ident = name;
    pos_ = i;
    parse_args(call);
    return call;
  }

  void parse_args(AstNode& call) {
    bump();  // '('
    call.children = scan([](const Token&) { return false; });
    if (cur().punct(")")) bump();
    finish(call);
  }

  std::string path_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ExternalMod> external_;
  std::vector<std::string> inline_prefix_;
};

namespace fs = std::filesystem;

std::string normalize_path(const std::string& p) {
  return fs::path(p).lexically_normal().generic_string();
}

struct ParsedFile {
  std::vector<AstNode> items;
  std::vector<ExternalMod> external;
};

// Candidate file paths for `mod name;` declared in `file`.
std::vector<std::string> mod_candidates(const std::string& file, const ExternalMod& m) {
  fs::path f(file);
  fs::path dir = f.parent_path();
  std::string stem = f.stem().string();
  if (stem != "lib" && stem != "main" && stem != "mod") dir /= stem;
  for (const auto& p : m.inline_prefix) dir /= p;
  return {normalize_path((dir / (m.name + ".rs")).string()),
          normalize_path((dir / m.name / "mod.rs").string())};
}

class Splicer {
 public:
  explicit Splicer(std::map<std::string, ParsedFile>& parsed) : parsed_(parsed) {}

  std::set<std::string> referenced() {
    std::set<std::string> out;
    for (const auto& [path, pf] : parsed_) {
      for (const auto& m : pf.external) {
        for (const auto& c : mod_candidates(path, m)) {
          if (parsed_.count(c) && c != path) {
            out.insert(c);
            break;
          }
        }
      }
    }
    return out;
  }

  AstNode file_module(const std::string& path) {
    AstNode mod;
    mod.kind = NodeKind::Module;
    mod.ident = path;
    auto& pf = parsed_.at(path);
    mod.span = Span{path, 1, 1};
    active_.insert(path);
    mod.children = pf.items;
    for (auto& c : mod.children) resolve(c, path);
    for (const auto& c : mod.children) mod.span.end = std::max(mod.span.end, c.span.end);
    active_.erase(path);
    return mod;
  }

 private:
  void resolve(AstNode& n, const std::string& path) {
    if (n.kind == NodeKind::Module && n.children.empty() && n.span.file == path) {
      const auto& pf = parsed_.at(path);
      for (const auto& m : pf.external) {
        if (m.line != n.span.start || !n.ident || m.name != *n.ident) continue;
        for (const auto& c : mod_candidates(path, m)) {
          if (!parsed_.count(c) || active_.count(c) || c == path) continue;
          AstNode sub = file_module(c);
          n.children = std::move(sub.children);
          break;
        }
      }
      return;
    }
    for (auto& c : n.children) resolve(c, path);
  }

  std::map<std::string, ParsedFile>& parsed_;
  std::set<std::string> active_;
};

}  // namespace

std::string_view kind_name(NodeKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<NodeKind> kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

AstNode parse_source(const std::vector<SourceFile>& files) {
  std::map<std::string, ParsedFile> parsed;
  std::vector<std::string> order;
  for (const auto& f : files) {
    std::string key = normalize_path(f.path);
    SourceParser p(key, f.text);
    ParsedFile pf;
    pf.items = p.parse_file();
    pf.external = p.external_mods();
    if (!parsed.count(key)) order.push_back(key);
    parsed[key] = std::move(pf);
  }

  Splicer splicer(parsed);
  auto referenced = splicer.referenced();

  AstNode root;
  root.kind = NodeKind::Root;
  for (const auto& path : order) {
    if (referenced.count(path)) continue;
    root.children.push_back(splicer.file_module(path));
  }
  return root;
}

}  // namespace cfgrank
