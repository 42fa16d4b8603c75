#include "gdt/flexscript/ast.hpp"

#include <array>
#include <cctype>

#include "gdt/flexscript/number.hpp"

namespace gdt::flexscript {

namespace {

constexpr std::array<std::pair<ObjectType, std::string_view>, 13> kTypePaths = {{
    {ObjectType::source, "/source"},
    {ObjectType::queue, "/queue"},
    {ObjectType::processor, "/processor"},
    {ObjectType::separator, "/separator"},
    {ObjectType::combiner, "/combiner"},
    {ObjectType::multiprocessor, "/multiprocessor"},
    {ObjectType::conveyor, "/conveyor"},
    {ObjectType::sink, "/sink"},
    {ObjectType::operator_, "/operator"},
    {ObjectType::robot, "/robot"},
    {ObjectType::agv, "/agv"},
    {ObjectType::taskexecuter, "/taskexecuter"},
    {ObjectType::dispatcher, "/dispatcher"},
}};

}  // namespace

std::string_view type_path(ObjectType type) noexcept {
  for (const auto& [t, path] : kTypePaths) {
    if (t == type) return path;
  }
  return "";
}

std::optional<ObjectType> type_from_path(std::string_view path) {
  for (const auto& [t, p] : kTypePaths) {
    if (p == path) return t;
  }
  return std::nullopt;
}

bool is_machine(ObjectType type) noexcept {
  return type == ObjectType::processor || type == ObjectType::separator ||
         type == ObjectType::combiner || type == ObjectType::multiprocessor;
}

bool is_transporter(ObjectType type) noexcept {
  return type == ObjectType::operator_ || type == ObjectType::robot ||
         type == ObjectType::agv || type == ObjectType::taskexecuter;
}

bool is_flow_object(ObjectType type) noexcept {
  return !is_transporter(type) && type != ObjectType::dispatcher;
}

std::string_view port_code(PortKind kind) noexcept {
  return kind == PortKind::flow ? "A" : "S";
}

std::string to_string(const ParamValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return format_number(*d);
  return to_string(std::get<DistributionExpr>(value));
}

const ObjectDecl* Script::find(std::string_view name) const {
  for (const auto& d : decls) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

bool Script::has_dangling_references() const {
  for (const auto& d : diagnostics) {
    if (d.kind == DiagnosticKind::DanglingReference) return true;
  }
  return false;
}

bool is_identifier(std::string_view name) noexcept {
  if (name.empty()) return false;
  auto c0 = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(c0) || c0 == '_')) return false;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

}  // namespace gdt::flexscript
