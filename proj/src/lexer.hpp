#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cfgrank::detail {

enum class Tok { Ident, Lifetime, Str, Char, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // string literals hold the unescaped-ish body
  int line = 0;

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool punct(std::string_view t) const { return is(Tok::Punct, t); }
  bool ident(std::string_view t) const { return is(Tok::Ident, t); }
};

/// Tokenizes a Rust-like source. Comments are skipped; unknown bytes become
/// single-character punctuation so lexing never fails on well-nested code.
std::vector<Token> tokenize(std::string_view src, int first_line = 1);

}  // namespace cfgrank::detail
