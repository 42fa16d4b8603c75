#pragma once

#include <string>
#include <string_view>

#include "gdt/flexscript/ast.hpp"

namespace gdt::flexscript {

/// Parses the statement vocabulary
///
///   createobject("<type>", "<name>", x, y, z);
///   setparam(<name>, "<Param>", <distribution-or-number>);
///   contextdragconnection(<from>, <to>, "<A|S>");
///
/// with `//` line comments. Names may be bare identifiers or quoted strings.
/// Recovery is per statement: a segment that does not match, or matches but
/// violates a field invariant, is skipped up to the next `;` and counted in
/// unknown_statements. A trailing statement without `;` is accepted.
///
/// Never throws.
Script parse(std::string_view source);

}  // namespace gdt::flexscript
