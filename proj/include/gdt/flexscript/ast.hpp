#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gdt/flexscript/distribution.hpp"

namespace gdt::flexscript {

// Closed registry of declarable object types.
enum class ObjectType {
  source,
  queue,
  processor,
  separator,
  combiner,
  multiprocessor,
  conveyor,
  sink,
  operator_,
  robot,
  agv,
  taskexecuter,
  dispatcher,
};

// "/source", "/queue", ...
std::string_view type_path(ObjectType type) noexcept;
std::optional<ObjectType> type_from_path(std::string_view path);

bool is_machine(ObjectType type) noexcept;      // processor, separator, combiner, multiprocessor
bool is_transporter(ObjectType type) noexcept;  // operator, robot, agv, taskexecuter
bool is_flow_object(ObjectType type) noexcept;  // everything that carries items

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Position&) const = default;
};

struct ObjectDecl {
  ObjectType type = ObjectType::source;
  std::string name;
  Position position;
  int line = 0;

  bool operator==(const ObjectDecl& other) const {
    return type == other.type && name == other.name && position == other.position;
  }
};

enum class PortKind { flow, center };

// "A" for flow ports, "S" for center ports.
std::string_view port_code(PortKind kind) noexcept;

struct Connection {
  std::string from;
  std::string to;
  PortKind port = PortKind::flow;
  int line = 0;

  bool operator==(const Connection& other) const {
    return from == other.from && to == other.to && port == other.port;
  }
};

using ParamValue = std::variant<double, DistributionExpr>;

std::string to_string(const ParamValue& value);

struct ParamAssignment {
  std::string object;
  std::string name;
  ParamValue value;
  int line = 0;

  bool operator==(const ParamAssignment& other) const {
    return object == other.object && name == other.name && value == other.value;
  }
};

struct ParseError {
  int line = 0;
  std::string message;
};

enum class DiagnosticKind { DuplicateDeclaration, DanglingReference };

struct Diagnostic {
  DiagnosticKind kind;
  int line = 0;
  std::string message;
};

/// Extraction result of one FlexScript source. Always produced, even for
/// garbage input; unrecognized statements are counted and reported in
/// parse_errors (one entry each).
struct Script {
  std::vector<ObjectDecl> decls;
  std::vector<ParamAssignment> params;
  std::vector<Connection> connections;

  std::size_t recognized_statements = 0;
  std::size_t unknown_statements = 0;
  std::vector<ParseError> parse_errors;
  std::vector<Diagnostic> diagnostics;

  const ObjectDecl* find(std::string_view name) const;
  bool has_dangling_references() const;

  // No recognized and no unknown statements at all.
  bool empty() const { return recognized_statements == 0 && unknown_statements == 0; }
};

// Identifier-shaped names print bare; anything else prints as a quoted string.
bool is_identifier(std::string_view name) noexcept;

std::string quote(std::string_view text);

}  // namespace gdt::flexscript
