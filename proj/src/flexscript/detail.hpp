#pragma once

#include <cstddef>
#include <span>

#include "gdt/flexscript/distribution.hpp"
#include "gdt/flexscript/lexer.hpp"

namespace gdt::flexscript::detail {

// Reads `[+|-] number` at pos; advances pos on success.
bool read_signed_number(std::span<const Token> tokens, std::size_t& pos, double& out);

// Parses `family ( [num {, num}] )` starting at pos and requires the call to
// end exactly at `tokens.size()`. Throws gdt::Error on any failure.
DistributionExpr parse_distribution_call(std::span<const Token> tokens, std::size_t pos);

}  // namespace gdt::flexscript::detail
