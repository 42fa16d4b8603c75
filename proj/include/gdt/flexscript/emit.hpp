#pragma once

#include <string>

#include "gdt/flexscript/ast.hpp"

namespace gdt::flexscript {

/// Serializes a script as one statement per line: declarations, then
/// parameters, then connections, each in stored order. Byte-deterministic.
///
/// Throws gdt::Error(UnemittableScript) if the script carries parse errors and
/// gdt::Error(DanglingReference) if a parameter or connection names an
/// undeclared object.
std::string emit_canonical(const Script& script);

std::string emit_statement(const ObjectDecl& decl);
std::string emit_statement(const ParamAssignment& param);
std::string emit_statement(const Connection& connection);

}  // namespace gdt::flexscript
