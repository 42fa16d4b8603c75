#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "gdt/gen/layers.hpp"
#include "gdt/metrics/structural.hpp"

namespace gdt::gen {

inline constexpr std::string_view kConfigSchema = "gdt.gen-config/1";

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sampling bounds for one industry. Means are in simulation time units.
/// `variability` caps the relative spread (sd / mean for normal, half-width
/// for uniform and triangular); at most 0.25 so normals stay at mu >= 4 sigma.
struct IndustryProfile {
  Range arrival_mean;
  Range service_mean;
  double variability = 0.2;
};

struct GenConfig {
  // Layer marginals, unnormalized.
  std::array<double, kLayoutTypeCount> layout_type_weights;
  std::array<double, kAutomationCount> automation_weights;
  std::array<double, kIndustryCount> industry_weights;
  std::array<double, kLayoutCategoryCount> layout_category_weights;

  std::size_t machines_min = 3;
  std::size_t machines_max = 3;

  std::array<IndustryProfile, kIndustryCount> industries;
  // TravelSpeed per automation level; the manual entry is unused.
  std::array<double, kAutomationCount> travel_speed;
  double convey_speed = 1.0;

  metrics::SvrWeights svr;

  static GenConfig defaults();

  // Throws gdt::Error(InvalidConfig).
  void validate() const;
};

/// Reads an INI file; missing keys keep their defaults. Throws
/// gdt::Error(IoError) when unreadable, InvalidConfig when malformed.
GenConfig load_config(const std::filesystem::path& path);

// The full configuration in the same INI layout load_config reads.
std::string to_ini(const GenConfig& config);

}  // namespace gdt::gen
