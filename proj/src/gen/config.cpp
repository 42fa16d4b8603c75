#include "gdt/gen/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gdt/error.hpp"
#include "gdt/flexscript/number.hpp"

namespace gdt::gen {

namespace pt = boost::property_tree;

namespace {

// Default (arrival mean, service mean, variability) per registry entry.
constexpr std::array<IndustryProfile, kIndustryCount> kDefaultProfiles = {{
    {{30, 60}, {10, 25}, 0.15},   // semiconductor
    {{12, 30}, {4, 10}, 0.20},    // electronics
    {{40, 90}, {15, 35}, 0.10},   // photomask
    {{5, 15}, {2, 5}, 0.25},      // food_processing
    {{20, 45}, {8, 18}, 0.20},    // automotive
    {{15, 35}, {6, 14}, 0.15},    // pharmaceutical
    {{8, 20}, {3, 8}, 0.25},      // textile
    {{25, 50}, {10, 20}, 0.20},   // metal_fabrication
    {{10, 25}, {4, 9}, 0.20},     // plastics
    {{5, 12}, {2, 4.5}, 0.25},    // logistics
    {{60, 120}, {25, 50}, 0.15},  // aerospace
    {{30, 70}, {12, 28}, 0.10},   // chemical
    {{25, 55}, {10, 22}, 0.20},   // furniture
}};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

std::string section_of(std::size_t industry) {
  return "industry_" + std::string(kIndustries[industry].name);
}

double read_number(const pt::ptree& tree, const std::string& path, double fallback) {
  const auto text = tree.get_optional<std::string>(path);
  if (!text) return fallback;
  const auto v = flexscript::parse_number(*text);
  if (!v) bad(path + ": not a number: '" + *text + "'");
  return *v;
}

template <std::size_t N, typename NameOf>
void read_weights(const pt::ptree& tree, const std::string& section, std::array<double, N>& out,
                  NameOf name_of) {
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = read_number(tree, section + "." + std::string(name_of(i)), out[i]);
  }
}

std::string num(double v) { return flexscript::format_number(v); }

}  // namespace

GenConfig GenConfig::defaults() {
  GenConfig c;
  c.layout_type_weights.fill(1.0);
  c.automation_weights.fill(1.0);
  c.industry_weights.fill(1.0);
  c.layout_category_weights.fill(1.0);
  c.industries = kDefaultProfiles;
  c.travel_speed = {0.0, 1.5, 3.0, 2.0, 2.5};
  return c;
}

void GenConfig::validate() const {
  auto check_weights = [](const auto& w, const char* layer) {
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) bad(std::string(layer) + ": weights must be >= 0");
      total += x;
    }
    if (!(total > 0.0)) bad(std::string(layer) + ": at least one weight must be positive");
  };
  check_weights(layout_type_weights, "layout_type");
  check_weights(automation_weights, "automation");
  check_weights(industry_weights, "industry");
  check_weights(layout_category_weights, "layout_category");

  if (machines_min < 1 || machines_max > 6 || machines_min > machines_max) {
    bad("machines: need 1 <= min <= max <= 6");
  }
  for (std::size_t i = 0; i < kIndustryCount; ++i) {
    const auto& p = industries[i];
    const std::string where = section_of(i);
    for (const Range& r : {p.arrival_mean, p.service_mean}) {
      if (!(r.lo > 0.0) || !(r.lo <= r.hi) || !std::isfinite(r.hi)) {
        bad(where + ": ranges must satisfy 0 < min <= max");
      }
    }
    if (!(p.variability >= 0.05 && p.variability <= 0.25)) {
      bad(where + ": variability must lie in [0.05, 0.25]");
    }
  }
  for (std::size_t a = 1; a < kAutomationCount; ++a) {
    if (!(travel_speed[a] > 0.0) || !std::isfinite(travel_speed[a])) {
      bad("travel_speed." + std::string(name(static_cast<Automation>(a))) + " must be > 0");
    }
  }
  if (!(convey_speed > 0.0) || !std::isfinite(convey_speed)) bad("conveyor.speed must be > 0");
  try {
    svr.validate();
  } catch (const Error& e) {
    bad(std::string("svr: ") + e.what());
  }
}

GenConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  std::stringstream in;
  in << file.rdbuf();
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(e.message() + " at line " + std::to_string(e.line()));
  }

  // Reject unknown sections and keys so typos do not pass silently.
  std::map<std::string, std::set<std::string>> known;
  auto allow = [&](const std::string& section, std::string_view key) {
    known[section].emplace(key);
  };
  allow("meta", "schema");
  for (std::size_t i = 0; i < kLayoutTypeCount; ++i) allow("layout_type", name(static_cast<LayoutType>(i)));
  for (std::size_t i = 0; i < kAutomationCount; ++i) allow("automation", name(static_cast<Automation>(i)));
  for (std::size_t i = 0; i < kLayoutCategoryCount; ++i) {
    allow("layout_category", name(static_cast<LayoutCategory>(i)));
  }
  for (std::size_t i = 0; i < kIndustryCount; ++i) {
    allow("industry", kIndustries[i].name);
    for (auto key : {"arrival_min", "arrival_max", "service_min", "service_max", "variability"}) {
      allow(section_of(i), key);
    }
  }
  for (std::size_t i = 1; i < kAutomationCount; ++i) allow("travel_speed", name(static_cast<Automation>(i)));
  allow("conveyor", "speed");
  allow("machines", "min");
  allow("machines", "max");
  allow("svr", "cs");
  allow("svr", "os");
  // read_ini drops sections without keys, so headers are checked on the raw text.
  {
    std::istringstream lines(in.str());
    for (std::string line; std::getline(lines, line);) {
      const auto open = line.find_first_not_of(" \t");
      if (open == std::string::npos || line[open] != '[') continue;
      const auto close = line.find(']', open);
      if (close == std::string::npos) continue;
      const std::string section = line.substr(open + 1, close - open - 1);
      if (!known.count(section)) bad("unknown section [" + section + "]");
    }
  }
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end() || body.data().size() > 0) bad("unknown section [" + section + "]");
    for (const auto& kv : body) {
      if (!it->second.count(kv.first)) bad("unknown key " + section + "." + kv.first);
    }
  }
  if (const auto schema = tree.get_optional<std::string>("meta.schema");
      schema && *schema != kConfigSchema) {
    bad("unsupported schema " + *schema);
  }

  GenConfig c = GenConfig::defaults();
  read_weights(tree, "layout_type", c.layout_type_weights,
               [](std::size_t i) { return name(static_cast<LayoutType>(i)); });
  read_weights(tree, "automation", c.automation_weights,
               [](std::size_t i) { return name(static_cast<Automation>(i)); });
  read_weights(tree, "industry", c.industry_weights,
               [](std::size_t i) { return kIndustries[i].name; });
  read_weights(tree, "layout_category", c.layout_category_weights,
               [](std::size_t i) { return name(static_cast<LayoutCategory>(i)); });
  for (std::size_t i = 0; i < kIndustryCount; ++i) {
    auto& p = c.industries[i];
    const std::string s = section_of(i) + ".";
    p.arrival_mean.lo = read_number(tree, s + "arrival_min", p.arrival_mean.lo);
    p.arrival_mean.hi = read_number(tree, s + "arrival_max", p.arrival_mean.hi);
    p.service_mean.lo = read_number(tree, s + "service_min", p.service_mean.lo);
    p.service_mean.hi = read_number(tree, s + "service_max", p.service_mean.hi);
    p.variability = read_number(tree, s + "variability", p.variability);
  }
  for (std::size_t i = 1; i < kAutomationCount; ++i) {
    c.travel_speed[i] = read_number(
        tree, "travel_speed." + std::string(name(static_cast<Automation>(i))), c.travel_speed[i]);
  }
  c.convey_speed = read_number(tree, "conveyor.speed", c.convey_speed);
  auto read_count = [&](const char* key, std::size_t fallback) {
    const double v = read_number(tree, std::string("machines.") + key, static_cast<double>(fallback));
    if (v != std::floor(v) || v < 0 || v > 1000) bad(std::string("machines.") + key + " must be an integer");
    return static_cast<std::size_t>(v);
  };
  c.machines_min = read_count("min", c.machines_min);
  c.machines_max = read_count("max", c.machines_max);
  c.svr.cs = read_number(tree, "svr.cs", c.svr.cs);
  c.svr.os = read_number(tree, "svr.os", c.svr.os);
  c.validate();
  return c;
}

std::string to_ini(const GenConfig& c) {
  std::ostringstream out;
  out << "[meta]\nschema = " << kConfigSchema << "\n";
  out << "\n; Layer marginals, relative weights.\n[layout_type]\n";
  for (std::size_t i = 0; i < kLayoutTypeCount; ++i) {
    out << name(static_cast<LayoutType>(i)) << " = " << num(c.layout_type_weights[i]) << "\n";
  }
  out << "\n[automation]\n";
  for (std::size_t i = 0; i < kAutomationCount; ++i) {
    out << name(static_cast<Automation>(i)) << " = " << num(c.automation_weights[i]) << "\n";
  }
  out << "\n[industry]\n";
  for (std::size_t i = 0; i < kIndustryCount; ++i) {
    out << kIndustries[i].name << " = " << num(c.industry_weights[i]) << "\n";
  }
  out << "\n[layout_category]\n";
  for (std::size_t i = 0; i < kLayoutCategoryCount; ++i) {
    out << name(static_cast<LayoutCategory>(i)) << " = " << num(c.layout_category_weights[i]) << "\n";
  }
  out << "\n[machines]\nmin = " << c.machines_min << "\nmax = " << c.machines_max << "\n";
  out << "\n[svr]\ncs = " << num(c.svr.cs) << "\nos = " << num(c.svr.os) << "\n";
  out << "\n[travel_speed]\n";
  for (std::size_t i = 1; i < kAutomationCount; ++i) {
    out << name(static_cast<Automation>(i)) << " = " << num(c.travel_speed[i]) << "\n";
  }
  out << "\n[conveyor]\nspeed = " << num(c.convey_speed) << "\n";
  for (std::size_t i = 0; i < kIndustryCount; ++i) {
    const auto& p = c.industries[i];
    out << "\n[" << section_of(i) << "]";
    if (kIndustries[i].placeholder) out << "\n; placeholder ranges";
    out << "\narrival_min = " << num(p.arrival_mean.lo) << "\narrival_max = " << num(p.arrival_mean.hi)
        << "\nservice_min = " << num(p.service_mean.lo) << "\nservice_max = " << num(p.service_mean.hi)
        << "\nvariability = " << num(p.variability) << "\n";
  }
  return out.str();
}

}  // namespace gdt::gen
