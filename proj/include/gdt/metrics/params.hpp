#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gdt/flexscript/ast.hpp"

namespace gdt::metrics {

inline constexpr double kValueTolerance = 1e-9;

struct ParamScore {
  std::size_t p_total = 0;
  std::size_t p_match = 0;
  double pmr = 0.0;
};

// (object name, parameter name)
using ParamKey = std::pair<std::string, std::string>;

/// Same kind (scalar vs distribution), same family, same arity and each
/// number equal within `rel_tolerance` relative to the larger magnitude.
bool values_match(const flexscript::ParamValue& a, const flexscript::ParamValue& b,
                  double rel_tolerance = kValueTolerance);

bool numbers_match(double a, double b, double rel_tolerance = kValueTolerance);

/// Share of reference parameters the generated script assigns with an equal
/// value. Parameters are keyed by (object, name); when a key is assigned more
/// than once the last assignment holds. Extra generated parameters are
/// ignored. Throws gdt::Error(EmptyReference) if the reference has none.
ParamScore pmr(const flexscript::Script& generated, const flexscript::Script& truth);

// Reference keys that the generated script misses or assigns differently.
std::vector<ParamKey> mismatched_params(const flexscript::Script& generated,
                                        const flexscript::Script& truth);

}  // namespace gdt::metrics
