#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gdt::flexscript {

enum class TokenKind {
  identifier,
  string,  // text holds the unescaped contents
  number,  // unsigned decimal literal
  lparen,
  rparen,
  comma,
  semicolon,
  minus,
  plus,
  other,  // any other byte
  error,  // irrecoverable lexing failure; always the last token
  end,
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  int line = 1;
};

/// Splits source text into tokens, dropping whitespace and `//` comments.
/// Lexing stops at the first unterminated string literal, which yields a
/// single `error` token. The result always ends with `end` or `error`.
std::vector<Token> tokenize(std::string_view source);

}  // namespace gdt::flexscript
