#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace gdt::gen {

enum class LayoutType { workstation, conveyor };
enum class Automation { manual, operator_, robot, agv, task_executor };
enum class LayoutCategory { linear, u_shaped, parallel, conveyor_form };

inline constexpr std::size_t kLayoutTypeCount = 2;
inline constexpr std::size_t kAutomationCount = 5;
inline constexpr std::size_t kLayoutCategoryCount = 4;
inline constexpr std::size_t kIndustryCount = 13;

struct IndustryInfo {
  std::string_view name;   // config / constraint key
  std::string_view label;  // prompt and sketch text
  bool placeholder;        // ranges are defaults, not observed data
};

// Fixed industry registry. Entries past the first four are placeholders whose
// ranges are configuration defaults, not observed data.
inline constexpr std::array<IndustryInfo, kIndustryCount> kIndustries = {{
    {"semiconductor", "semiconductor", false},
    {"electronics", "electronics", false},
    {"photomask", "photomask", false},
    {"food_processing", "food processing", false},
    {"automotive", "automotive", true},
    {"pharmaceutical", "pharmaceutical", true},
    {"textile", "textile", true},
    {"metal_fabrication", "metal fabrication", true},
    {"plastics", "plastics", true},
    {"logistics", "logistics", true},
    {"aerospace", "aerospace", true},
    {"chemical", "chemical", true},
    {"furniture", "furniture", true},
}};

std::string_view name(LayoutType v) noexcept;
std::string_view name(Automation v) noexcept;
std::string_view name(LayoutCategory v) noexcept;

std::string_view label(LayoutType v) noexcept;
std::string_view label(Automation v) noexcept;
std::string_view label(LayoutCategory v) noexcept;

std::optional<LayoutType> layout_type_from_name(std::string_view s);
std::optional<Automation> automation_from_name(std::string_view s);
std::optional<LayoutCategory> layout_category_from_name(std::string_view s);
std::optional<std::size_t> industry_from_name(std::string_view s);

}  // namespace gdt::gen
