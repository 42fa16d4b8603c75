#include "gdt/gen/layers.hpp"

namespace gdt::gen {

namespace {

constexpr std::array<std::string_view, kLayoutTypeCount> kLayoutTypeNames = {"workstation",
                                                                             "conveyor"};
constexpr std::array<std::string_view, kLayoutTypeCount> kLayoutTypeLabels = {
    "workstation-based", "conveyor-based"};

constexpr std::array<std::string_view, kAutomationCount> kAutomationNames = {
    "manual", "operator", "robot", "agv", "task_executor"};
constexpr std::array<std::string_view, kAutomationCount> kAutomationLabels = {
    "manual", "operator", "robot", "AGV", "task-executor"};

constexpr std::array<std::string_view, kLayoutCategoryCount> kCategoryNames = {
    "linear", "u_shaped", "parallel", "conveyor_form"};
constexpr std::array<std::string_view, kLayoutCategoryCount> kCategoryLabels = {
    "linear", "U-shaped", "parallel", "conveyor-form"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view name(LayoutType v) noexcept { return kLayoutTypeNames[static_cast<std::size_t>(v)]; }
std::string_view name(Automation v) noexcept { return kAutomationNames[static_cast<std::size_t>(v)]; }
std::string_view name(LayoutCategory v) noexcept { return kCategoryNames[static_cast<std::size_t>(v)]; }

std::string_view label(LayoutType v) noexcept { return kLayoutTypeLabels[static_cast<std::size_t>(v)]; }
std::string_view label(Automation v) noexcept { return kAutomationLabels[static_cast<std::size_t>(v)]; }
std::string_view label(LayoutCategory v) noexcept { return kCategoryLabels[static_cast<std::size_t>(v)]; }

std::optional<LayoutType> layout_type_from_name(std::string_view s) {
  return lookup<LayoutType>(kLayoutTypeNames, s);
}
std::optional<Automation> automation_from_name(std::string_view s) {
  return lookup<Automation>(kAutomationNames, s);
}
std::optional<LayoutCategory> layout_category_from_name(std::string_view s) {
  return lookup<LayoutCategory>(kCategoryNames, s);
}

std::optional<std::size_t> industry_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kIndustries.size(); ++i) {
    if (kIndustries[i].name == s) return i;
  }
  return std::nullopt;
}

}  // namespace gdt::gen
