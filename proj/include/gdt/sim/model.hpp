#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdt/flexscript/ast.hpp"
#include "gdt/outcome.hpp"

namespace gdt::sim {

using flexscript::DistributionExpr;
using flexscript::ObjectType;
using flexscript::Position;

inline constexpr std::size_t kDefaultQueueCapacity = 1000;
inline constexpr std::size_t kDefaultComponentQuantity = 1;
inline constexpr std::size_t kDefaultSplitQuantity = 2;
inline constexpr double kDefaultConveySpeed = 1.0;
inline constexpr double kDefaultTravelSpeed = 2.0;

struct ModelObject {
  std::string name;
  ObjectType type = ObjectType::source;
  Position position;

  std::vector<std::size_t> outputs;  // flow edges, in connection order
  std::vector<std::size_t> inputs;   // flow edges, in connection order

  std::optional<DistributionExpr> inter_arrival;
  std::optional<DistributionExpr> process_time;
  std::optional<DistributionExpr> setup_time;

  std::size_t capacity = kDefaultQueueCapacity;
  std::size_t component_quantity = kDefaultComponentQuantity;
  std::size_t split_quantity = kDefaultSplitQuantity;
  double convey_speed = kDefaultConveySpeed;
  double travel_speed = kDefaultTravelSpeed;

  // Transporter or dispatcher that carries items into this object.
  std::optional<std::size_t> carrier;
  // For dispatchers: transporters it hands requests to, in binding order.
  std::vector<std::size_t> fleet;
};

/// Validated executable model.
struct SimModel {
  std::vector<ModelObject> objects;
  std::vector<std::string> diagnostics;  // defaults applied, ignored statements

  std::optional<std::size_t> index_of(const std::string& name) const;
};

/// Thrown by build_model; carries the execution failure it maps to.
class ModelError : public std::runtime_error {
 public:
  ModelError(FailureReason reason, const std::string& message)
      : std::runtime_error(message), reason_(reason) {}
  FailureReason reason() const noexcept { return reason_; }

 private:
  FailureReason reason_;
};

/// Validates a parsed script and compiles it into a SimModel.
///
/// Checks, in order: every reference resolves (DanglingReference); parameter
/// values are usable (RuntimeError); at least one source exists and every
/// source reaches a sink over flow edges (NoPathToSink); every source has an
/// InterArrivalTime and every machine a ProcessTime (MissingRequiredParam).
/// Optional parameters fall back to defaults, each noted in diagnostics.
SimModel build_model(const flexscript::Script& script);

}  // namespace gdt::sim
