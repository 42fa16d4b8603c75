#include "gdt/flexscript/parser.hpp"

#include <span>
#include <unordered_set>
#include <variant>

#include "detail.hpp"
#include "gdt/error.hpp"
#include "gdt/flexscript/lexer.hpp"

namespace gdt::flexscript {

namespace {

using Tokens = std::span<const Token>;

// Thrown inside a statement; caught per segment.
struct StatementError {
  std::string message;
};

class StatementReader {
 public:
  explicit StatementReader(Tokens tokens) : tokens_(tokens) {}

  bool at_end() const { return pos_ >= tokens_.size(); }
  std::size_t pos() const { return pos_; }
  Tokens rest() const { return tokens_.subspan(pos_); }

  const Token& peek() const {
    static const Token kEnd{TokenKind::end, "<end>", 0};
    return at_end() ? kEnd : tokens_[pos_];
  }

  void expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind) fail("expected " + std::string(what));
    ++pos_;
  }

  std::string string_literal(std::string_view what) {
    if (peek().kind != TokenKind::string) fail("expected quoted " + std::string(what));
    return tokens_[pos_++].text;
  }

  // Bare identifier or quoted string.
  std::string name(std::string_view what) {
    const auto& t = peek();
    if (t.kind != TokenKind::identifier && t.kind != TokenKind::string) {
      fail("expected " + std::string(what));
    }
    ++pos_;
    return t.text;
  }

  double number(std::string_view what) {
    double v = 0.0;
    if (!detail::read_signed_number(tokens_, pos_, v)) fail("expected number for " + std::string(what));
    return v;
  }

  void finish() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw StatementError{why + " near '" + peek().text + "'"};
  }

 private:
  Tokens tokens_;
  std::size_t pos_ = 0;
};

ObjectDecl read_createobject(StatementReader& r, int line) {
  r.expect(TokenKind::lparen, "'('");
  std::string type_text = r.string_literal("object type");
  auto type = type_from_path(type_text);
  if (!type) throw StatementError{"unknown object type '" + type_text + "'"};
  r.expect(TokenKind::comma, "','");
  std::string name = r.name("object name");
  if (name.empty()) throw StatementError{"empty object name"};
  Position p;
  r.expect(TokenKind::comma, "','");
  p.x = r.number("x");
  r.expect(TokenKind::comma, "','");
  p.y = r.number("y");
  r.expect(TokenKind::comma, "','");
  p.z = r.number("z");
  r.expect(TokenKind::rparen, "')'");
  r.finish();
  return ObjectDecl{*type, std::move(name), p, line};
}

ParamAssignment read_setparam(StatementReader& r, int line) {
  r.expect(TokenKind::lparen, "'('");
  std::string object = r.name("object name");
  r.expect(TokenKind::comma, "','");
  std::string param = r.string_literal("parameter name");
  if (param.empty()) throw StatementError{"empty parameter name"};
  r.expect(TokenKind::comma, "','");

  // The value runs up to the statement's closing parenthesis.
  Tokens rest = r.rest();
  if (rest.empty() || rest.back().kind != TokenKind::rparen) {
    throw StatementError{"expected ')' closing setparam"};
  }
  Tokens value_tokens = rest.first(rest.size() - 1);
  ParamValue value;
  if (!value_tokens.empty() && value_tokens.front().kind == TokenKind::identifier) {
    try {
      value = detail::parse_distribution_call(value_tokens, 0);
    } catch (const Error& e) {
      throw StatementError{e.what()};
    }
  } else {
    std::size_t p = 0;
    double v = 0.0;
    if (!detail::read_signed_number(value_tokens, p, v) || p != value_tokens.size()) {
      throw StatementError{"parameter value is neither a number nor a distribution"};
    }
    value = v;
  }
  return ParamAssignment{std::move(object), std::move(param), std::move(value), line};
}

Connection read_connection(StatementReader& r, int line) {
  r.expect(TokenKind::lparen, "'('");
  std::string from = r.name("source object");
  r.expect(TokenKind::comma, "','");
  std::string to = r.name("target object");
  r.expect(TokenKind::comma, "','");
  std::string port = r.string_literal("port kind");
  r.expect(TokenKind::rparen, "')'");
  r.finish();
  PortKind kind;
  if (port == "A") {
    kind = PortKind::flow;
  } else if (port == "S") {
    kind = PortKind::center;
  } else {
    throw StatementError{"port kind must be \"A\" or \"S\", got \"" + port + "\""};
  }
  if (from.empty() || to.empty()) throw StatementError{"empty endpoint name"};
  if (kind == PortKind::flow && from == to) {
    throw StatementError{"flow connection from '" + from + "' to itself"};
  }
  return Connection{std::move(from), std::move(to), kind, line};
}

using Statement = std::variant<ObjectDecl, ParamAssignment, Connection>;

Statement read_statement(Tokens segment) {
  StatementReader r(segment);
  const Token& head = r.peek();
  const int line = head.line;
  if (head.kind != TokenKind::identifier) r.fail("expected statement keyword");
  r.expect(TokenKind::identifier, "statement keyword");
  if (head.text == "createobject") return read_createobject(r, line);
  if (head.text == "setparam") return read_setparam(r, line);
  if (head.text == "contextdragconnection") return read_connection(r, line);
  throw StatementError{"unknown statement '" + head.text + "'"};
}

}  // namespace

Script parse(std::string_view source) {
  const std::vector<Token> tokens = tokenize(source);
  Script script;
  std::unordered_set<std::string> declared;

  auto reject = [&](int line, std::string message) {
    ++script.unknown_statements;
    script.parse_errors.push_back(ParseError{line, std::move(message)});
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const TokenKind kind = tokens[i].kind;
    if (kind == TokenKind::error) {
      // Extraction ends here; the partial segment is the one failure.
      reject(tokens[i].line, tokens[i].text);
      break;
    }
    if (kind != TokenKind::semicolon && kind != TokenKind::end) continue;
    Tokens segment(tokens.data() + start, i - start);
    start = i + 1;
    if (segment.empty()) continue;

    try {
      Statement stmt = read_statement(segment);
      ++script.recognized_statements;
      if (auto* decl = std::get_if<ObjectDecl>(&stmt)) {
        if (!declared.insert(decl->name).second) {
          script.diagnostics.push_back(
              {DiagnosticKind::DuplicateDeclaration, decl->line,
               "duplicate declaration of '" + decl->name + "' ignored"});
        } else {
          script.decls.push_back(std::move(*decl));
        }
      } else if (auto* param = std::get_if<ParamAssignment>(&stmt)) {
        script.params.push_back(std::move(*param));
      } else {
        script.connections.push_back(std::get<Connection>(std::move(stmt)));
      }
    } catch (const StatementError& e) {
      reject(segment.front().line, e.message);
    }
  }

  auto dangling = [&](int line, const std::string& name, std::string_view role) {
    if (declared.count(name)) return;
    script.diagnostics.push_back({DiagnosticKind::DanglingReference, line,
                                  std::string(role) + " references undeclared object '" +
                                      name + "'"});
  };
  for (const auto& p : script.params) dangling(p.line, p.object, "setparam");
  for (const auto& c : script.connections) {
    dangling(c.line, c.from, "connection");
    dangling(c.line, c.to, "connection");
  }
  return script;
}

}  // namespace gdt::flexscript
