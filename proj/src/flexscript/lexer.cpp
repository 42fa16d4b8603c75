#include "gdt/flexscript/lexer.hpp"

#include <cctype>

namespace gdt::flexscript {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  const std::size_t n = src.size();

  auto push = [&](TokenKind kind, std::string text) {
    out.push_back(Token{kind, std::move(text), line});
  };

  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && is_ident_char(src[j])) ++j;
      push(TokenKind::identifier, std::string(src.substr(i, j - i)));
      i = j;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(src[i + 1]))) {
      std::size_t j = i;
      while (j < n && is_digit(src[j])) ++j;
      if (j < n && src[j] == '.') {
        ++j;
        while (j < n && is_digit(src[j])) ++j;
      }
      if (j < n && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < n && is_digit(src[k])) {
          while (k < n && is_digit(src[k])) ++k;
          j = k;
        }
      }
      push(TokenKind::number, std::string(src.substr(i, j - i)));
      i = j;
      continue;
    }
    if (c == '"') {
      const int start_line = line;
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        char d = src[j];
        if (d == '"') {
          closed = true;
          ++j;
          break;
        }
        if (d == '\n') ++line;
        if (d == '\\' && j + 1 < n) {
          char e = src[j + 1];
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            default: text += e; break;
          }
          if (e == '\n') ++line;
          j += 2;
          continue;
        }
        text += d;
        ++j;
      }
      if (!closed) {
        out.push_back(Token{TokenKind::error, "unterminated string literal", start_line});
        return out;
      }
      out.push_back(Token{TokenKind::string, std::move(text), start_line});
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(TokenKind::lparen, "("); break;
      case ')': push(TokenKind::rparen, ")"); break;
      case ',': push(TokenKind::comma, ","); break;
      case ';': push(TokenKind::semicolon, ";"); break;
      case '-': push(TokenKind::minus, "-"); break;
      case '+': push(TokenKind::plus, "+"); break;
      default: push(TokenKind::other, std::string(1, c)); break;
    }
    ++i;
  }
  push(TokenKind::end, "");
  return out;
}

}  // namespace gdt::flexscript
