#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gdt::flexscript {

// Distribution families usable for timing parameters. Sources draw
// interarrival times from the first five; machines may use all nine.
enum class Family {
  constant,
  exponential,
  normal,
  triangular,
  uniform,
  lognormal,
  weibull,
  gamma,
  poisson,
};

inline constexpr std::array<Family, 5> kArrivalFamilies = {
    Family::constant, Family::exponential, Family::normal, Family::triangular,
    Family::uniform};

inline constexpr std::array<Family, 9> kServiceFamilies = {
    Family::constant,  Family::exponential, Family::normal,
    Family::triangular, Family::uniform,    Family::lognormal,
    Family::weibull,   Family::gamma,       Family::poisson};

std::string_view family_name(Family family) noexcept;

// Case-insensitive lookup.
std::optional<Family> family_from_name(std::string_view name);

std::size_t family_arity(Family family) noexcept;

bool is_arrival_family(Family family) noexcept;

/// A distribution family applied to its numeric arguments, e.g.
/// `triangular(2, 5, 9)`. Arguments follow the family's conventional
/// parameterization: exponential takes its mean, weibull takes (shape k,
/// scale lambda), gamma takes (shape alpha, scale theta), lognormal takes the
/// mean and standard deviation of the underlying normal.
struct DistributionExpr {
  Family family = Family::constant;
  std::vector<double> args;

  bool operator==(const DistributionExpr&) const = default;
};

// Throws gdt::Error (ArityMismatch, ArgumentOutOfRange) when the arguments do
// not satisfy the family's arity and range rules.
void validate(const DistributionExpr& expr);

DistributionExpr make_distribution(Family family, std::vector<double> args);

/// Parses a call expression such as "Weibull(1.5, 4.0)". The family name is
/// matched case-insensitively. Throws gdt::Error with UnknownFamily,
/// ArityMismatch, ArgumentOutOfRange or MalformedExpression; the error's
/// token() holds the offending token.
DistributionExpr parse_distribution(std::string_view text);

// Canonical text: lowercase family, shortest round-trip arguments.
std::string to_string(const DistributionExpr& expr);

}  // namespace gdt::flexscript
