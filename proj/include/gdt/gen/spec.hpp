#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gdt/flexscript/distribution.hpp"
#include "gdt/gen/config.hpp"
#include "gdt/gen/layers.hpp"

namespace gdt::gen {

using flexscript::DistributionExpr;

inline constexpr std::size_t kMinMachines = 1;
inline constexpr std::size_t kMaxMachines = 6;

/// One point of the design space. Together with its seed it fixes the
/// prompt, sketch and code of a record.
struct GenSpec {
  LayoutType layout_type = LayoutType::workstation;
  Automation automation = Automation::manual;
  std::size_t industry = 0;  // index into kIndustries
  LayoutCategory layout_category = LayoutCategory::linear;
  std::size_t n_machines = 3;
  DistributionExpr source_dist;
  std::vector<DistributionExpr> machine_dists;
  double travel_speed = 0.0;  // 0 when manual
  double convey_speed = 1.0;
  std::uint64_t seed = 0;

  bool operator==(const GenSpec&) const = default;
};

struct Constraints {
  std::optional<LayoutType> layout_type;
  std::optional<Automation> automation;
  std::optional<std::size_t> industry;
  std::optional<LayoutCategory> layout_category;
  std::optional<std::size_t> n_machines;

  // Applies "key=value". Keys: layout_type, automation, industry,
  // layout_category, n_machines. Throws gdt::Error(InvalidConstraint).
  void set(std::string_view assignment);

  bool all_layers_fixed() const {
    return layout_type && automation && industry && layout_category;
  }
};

/// 5 * 9^n: source family times one service family per machine.
std::uint64_t enumerate_combinations(std::size_t n_machines);

/// Draws a spec. Every layer is drawn even when constrained, so fixing one
/// layer leaves the others' draws unchanged.
GenSpec sample_spec(std::uint64_t seed, const Constraints& constraints = {},
                    const GenConfig& config = GenConfig::defaults());

/// The index-th point of the exhaustive family enumeration with fixed
/// arguments: index % 5 selects the source family, the base-9 digits of
/// index / 5 the machine families. Requires all layers fixed
/// (InvalidConstraint otherwise) and index < enumerate_combinations(n).
GenSpec enumerate_spec(std::uint64_t index, std::uint64_t seed, const Constraints& constraints,
                       const GenConfig& config = GenConfig::defaults());

/// Distribution of `family` with the given mean. `spread` is the relative
/// spread for normal/uniform/triangular; `shape` is lognormal sigma, weibull
/// k or gamma alpha. Arguments are rounded to two decimals.
DistributionExpr distribution_for_mean(flexscript::Family family, double mean, double spread,
                                       double shape);

}  // namespace gdt::gen
