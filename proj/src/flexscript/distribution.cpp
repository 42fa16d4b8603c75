#include "gdt/flexscript/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "detail.hpp"
#include "gdt/error.hpp"
#include "gdt/flexscript/lexer.hpp"
#include "gdt/flexscript/number.hpp"

namespace gdt::flexscript {

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::constant: return "constant";
    case Family::exponential: return "exponential";
    case Family::normal: return "normal";
    case Family::triangular: return "triangular";
    case Family::uniform: return "uniform";
    case Family::lognormal: return "lognormal";
    case Family::weibull: return "weibull";
    case Family::gamma: return "gamma";
    case Family::poisson: return "poisson";
  }
  return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Family f : kServiceFamilies) {
    if (family_name(f) == lower) return f;
  }
  return std::nullopt;
}

std::size_t family_arity(Family family) noexcept {
  switch (family) {
    case Family::constant:
    case Family::exponential:
    case Family::poisson:
      return 1;
    case Family::triangular:
      return 3;
    default:
      return 2;
  }
}

bool is_arrival_family(Family family) noexcept {
  return std::find(kArrivalFamilies.begin(), kArrivalFamilies.end(), family) !=
         kArrivalFamilies.end();
}

namespace {

// The token is the offending argument.
[[noreturn]] void out_of_range(const DistributionExpr& expr, std::size_t arg, std::string_view why) {
  throw Error(ErrorCode::ArgumentOutOfRange, to_string(expr) + ": " + std::string(why),
              format_number(expr.args[arg]));
}

}  // namespace

void validate(const DistributionExpr& expr) {
  const std::size_t arity = family_arity(expr.family);
  if (expr.args.size() != arity) {
    throw Error(ErrorCode::ArityMismatch,
                std::string(family_name(expr.family)) + " takes " + std::to_string(arity) +
                    " argument(s), got " + std::to_string(expr.args.size()),
                std::string(family_name(expr.family)));
  }
  for (std::size_t i = 0; i < expr.args.size(); ++i) {
    if (!std::isfinite(expr.args[i])) out_of_range(expr, i, "arguments must be finite");
  }
  const auto& a = expr.args;
  switch (expr.family) {
    case Family::constant:
      break;
    case Family::exponential:
      if (!(a[0] > 0)) out_of_range(expr, 0, "mean must be > 0");
      break;
    case Family::normal:
      if (!(a[1] >= 0)) out_of_range(expr, 1, "sigma must be >= 0");
      break;
    case Family::triangular:
      if (!(a[0] <= a[1])) out_of_range(expr, 1, "mode below lower bound");
      if (!(a[1] <= a[2])) out_of_range(expr, 1, "mode exceeds upper bound");
      break;
    case Family::uniform:
      if (!(a[0] <= a[1])) out_of_range(expr, 0, "lower bound exceeds upper bound");
      break;
    case Family::lognormal:
      if (!(a[1] > 0)) out_of_range(expr, 1, "sigma must be > 0");
      break;
    case Family::weibull:
      if (!(a[0] > 0)) out_of_range(expr, 0, "shape must be > 0");
      if (!(a[1] > 0)) out_of_range(expr, 1, "scale must be > 0");
      break;
    case Family::gamma:
      if (!(a[0] > 0)) out_of_range(expr, 0, "shape must be > 0");
      if (!(a[1] > 0)) out_of_range(expr, 1, "scale must be > 0");
      break;
    case Family::poisson:
      if (!(a[0] > 0)) out_of_range(expr, 0, "mean must be > 0");
      break;
  }
}

DistributionExpr make_distribution(Family family, std::vector<double> args) {
  DistributionExpr expr{family, std::move(args)};
  validate(expr);
  return expr;
}

std::string to_string(const DistributionExpr& expr) {
  std::string out(family_name(expr.family));
  out += '(';
  for (std::size_t i = 0; i < expr.args.size(); ++i) {
    if (i) out += ", ";
    out += format_number(expr.args[i]);
  }
  out += ')';
  return out;
}

namespace detail {

bool read_signed_number(std::span<const Token> tokens, std::size_t& pos, double& out) {
  std::size_t p = pos;
  bool negative = false;
  if (p < tokens.size() &&
      (tokens[p].kind == TokenKind::minus || tokens[p].kind == TokenKind::plus)) {
    negative = tokens[p].kind == TokenKind::minus;
    ++p;
  }
  if (p >= tokens.size() || tokens[p].kind != TokenKind::number) return false;
  auto value = parse_number(tokens[p].text);
  if (!value) return false;
  out = negative ? -*value : *value;
  pos = p + 1;
  return true;
}

DistributionExpr parse_distribution_call(std::span<const Token> tokens, std::size_t pos) {
  auto malformed = [&](std::size_t at, std::string_view why) -> Error {
    std::string tok = at < tokens.size() ? tokens[at].text : std::string("<end>");
    return Error(ErrorCode::MalformedExpression, std::string(why) + " near '" + tok + "'", tok);
  };
  if (pos >= tokens.size() || tokens[pos].kind != TokenKind::identifier) {
    throw malformed(pos, "expected distribution name");
  }
  const std::string& name = tokens[pos].text;
  auto family = family_from_name(name);
  if (!family) {
    throw Error(ErrorCode::UnknownFamily, "unknown distribution family '" + name + "'", name);
  }
  ++pos;
  if (pos >= tokens.size() || tokens[pos].kind != TokenKind::lparen) {
    throw malformed(pos, "expected '('");
  }
  ++pos;
  DistributionExpr expr{*family, {}};
  if (pos < tokens.size() && tokens[pos].kind == TokenKind::rparen) {
    ++pos;
  } else {
    while (true) {
      double v = 0.0;
      if (!read_signed_number(tokens, pos, v)) throw malformed(pos, "expected number");
      expr.args.push_back(v);
      if (pos < tokens.size() && tokens[pos].kind == TokenKind::comma) {
        ++pos;
        continue;
      }
      if (pos < tokens.size() && tokens[pos].kind == TokenKind::rparen) {
        ++pos;
        break;
      }
      throw malformed(pos, "expected ',' or ')'");
    }
  }
  if (pos != tokens.size()) throw malformed(pos, "trailing tokens after distribution");
  validate(expr);
  return expr;
}

}  // namespace detail

DistributionExpr parse_distribution(std::string_view text) {
  auto tokens = tokenize(text);
  // Drop the terminator; an error token means an unterminated string.
  if (!tokens.empty() && tokens.back().kind == TokenKind::error) {
    throw Error(ErrorCode::MalformedExpression, "unterminated string literal", tokens.back().text);
  }
  tokens.pop_back();
  return detail::parse_distribution_call(tokens, 0);
}

}  // namespace gdt::flexscript
