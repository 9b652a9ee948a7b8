#include "lexer.hpp"

#include <array>
#include <cctype>

namespace cfgrank::detail {

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

constexpr std::array<std::string_view, 12> kMultiPunct = {
    "..=", "...", "::", "->", "=>", "==", "!=", "<=", ">=", "&&", "||", ".."};

// Length in bytes of the UTF-8 sequence starting with `c`.
std::size_t utf8_len(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xE) return 3;
  if ((c >> 3) == 0x1E) return 4;
  return 1;
}

class Lexer {
 public:
  Lexer(std::string_view src, int line) : src_(src), line_(line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    out.push_back(Token{Tok::End, "", line_});
    return out;
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        advance(2);
        int depth = 1;
        while (pos_ < src_.size() && depth > 0) {
          if (peek() == '/' && peek(1) == '*') {
            ++depth;
            advance(2);
          } else if (peek() == '*' && peek(1) == '/') {
            --depth;
            advance(2);
          } else {
            advance();
          }
        }
      } else {
        break;
      }
    }
  }

  Token next() {
    int line = line_;
    unsigned char c = static_cast<unsigned char>(peek());

    // raw strings / byte strings / c strings: r"..", r#".."#, b"..", br"..", c".."
    if (c == 'r' || c == 'b' || c == 'c') {
      std::size_t k = 0;
      if ((c == 'b' || c == 'c') && peek(1) == 'r') k = 1;
      bool raw = (c == 'r') || k == 1;
      std::size_t q = raw ? k + 1 : 1;
      if (raw) {
        std::size_t hashes = 0;
        while (peek(q + hashes) == '#') ++hashes;
        if (peek(q + hashes) == '"') {
          advance(q + hashes + 1);
          std::string body;
          while (pos_ < src_.size()) {
            if (peek() == '"') {
              std::size_t h = 0;
              while (h < hashes && peek(1 + h) == '#') ++h;
              if (h == hashes) {
                advance(1 + hashes);
                return {Tok::Str, body, line};
              }
            }
            body.push_back(peek());
            advance();
          }
          return {Tok::Str, body, line};
        }
      } else if (peek(1) == '"') {
        advance();
        return quoted(line);
      } else if (c == 'b' && peek(1) == '\'') {
        advance();
        return char_literal(line);
      }
    }
    if (c == 'r' && peek(1) == '#' && ident_start(static_cast<unsigned char>(peek(2)))) {
      advance(2);
      return ident(line);
    }
    if (ident_start(c)) return ident(line);
    if (std::isdigit(c)) return number(line);
    if (c == '"') return quoted(line);
    if (c == '\'') {
      // lifetime or char literal
      if (peek(1) == '\\') return char_literal(line);
      std::size_t len = utf8_len(static_cast<unsigned char>(peek(1)));
      if (peek(1 + len) == '\'') return char_literal(line);
      advance();
      Token t = ident(line);
      t.kind = Tok::Lifetime;
      return t;
    }
    for (auto mp : kMultiPunct) {
      if (src_.substr(pos_, mp.size()) == mp) {
        advance(mp.size());
        return {Tok::Punct, std::string(mp), line};
      }
    }
    std::size_t len = utf8_len(c);
    std::string s(src_.substr(pos_, len));
    advance(len);
    return {Tok::Punct, s, line};
  }

  Token ident(int line) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(peek()))) advance();
    return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line};
  }

  Token number(int line) {
    std::size_t start = pos_;
    bool seen_dot = false;
    while (pos_ < src_.size()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        // exponent sign: 1e-3
        if ((c == 'e' || c == 'E') && (peek(1) == '-' || peek(1) == '+') &&
            std::isdigit(static_cast<unsigned char>(peek(2))) &&
            !(src_.substr(start, 2) == "0x")) {
          advance(2);
          continue;
        }
        advance();
      } else if (c == '.' && !seen_dot && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        seen_dot = true;
        advance();
      } else {
        break;
      }
    }
    return {Tok::Number, std::string(src_.substr(start, pos_ - start)), line};
  }

  Token quoted(int line) {
    advance();  // opening quote
    std::string body;
    while (pos_ < src_.size() && peek() != '"') {
      if (peek() == '\\') {
        body.push_back(peek());
        advance();
      }
      body.push_back(peek());
      advance();
    }
    advance();  // closing quote
    return {Tok::Str, body, line};
  }

  Token char_literal(int line) {
    advance();  // opening '
    std::string body;
    while (pos_ < src_.size() && peek() != '\'') {
      if (peek() == '\\') {
        body.push_back(peek());
        advance();
      }
      body.push_back(peek());
      advance();
    }
    advance();
    return {Tok::Char, body, line};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src, int first_line) {
  return Lexer(src, first_line).run();
}

}  // namespace cfgrank::detail
