#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gdt::flexscript {

// Shortest decimal that round-trips to the same double, never in exponent
// notation. Negative zero prints as "0".
std::string format_number(double value);

// Accepts an optional sign, digits with an optional fraction and an optional
// decimal exponent. The whole input must be consumed and the result finite.
std::optional<double> parse_number(std::string_view text);

}  // namespace gdt::flexscript
