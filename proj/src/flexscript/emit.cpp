#include "gdt/flexscript/emit.hpp"

#include "gdt/error.hpp"
#include "gdt/flexscript/number.hpp"

namespace gdt::flexscript {

namespace {

std::string name_ref(std::string_view name) {
  return is_identifier(name) ? std::string(name) : quote(name);
}

}  // namespace

std::string emit_statement(const ObjectDecl& decl) {
  return "createobject(" + quote(type_path(decl.type)) + ", " + quote(decl.name) + ", " +
         format_number(decl.position.x) + ", " + format_number(decl.position.y) + ", " +
         format_number(decl.position.z) + ");";
}

std::string emit_statement(const ParamAssignment& param) {
  return "setparam(" + name_ref(param.object) + ", " + quote(param.name) + ", " +
         to_string(param.value) + ");";
}

std::string emit_statement(const Connection& connection) {
  return "contextdragconnection(" + name_ref(connection.from) + ", " +
         name_ref(connection.to) + ", " + quote(port_code(connection.port)) + ");";
}

std::string emit_canonical(const Script& script) {
  if (!script.parse_errors.empty()) {
    throw Error(ErrorCode::UnemittableScript,
                "script has " + std::to_string(script.parse_errors.size()) + " parse error(s)");
  }
  auto require = [&](const std::string& name) {
    if (!script.find(name)) {
      throw Error(ErrorCode::DanglingReference, "undeclared object '" + name + "'", name);
    }
  };
  for (const auto& p : script.params) require(p.object);
  for (const auto& c : script.connections) {
    require(c.from);
    require(c.to);
  }

  std::string out;
  for (const auto& d : script.decls) out += emit_statement(d) + "\n";
  for (const auto& p : script.params) out += emit_statement(p) + "\n";
  for (const auto& c : script.connections) out += emit_statement(c) + "\n";
  return out;
}

}  // namespace gdt::flexscript
