#include "gdt/gen/spec.hpp"

#include <algorithm>
#include <cmath>

#include "gdt/dist/moments.hpp"
#include "gdt/dist/rng.hpp"
#include "gdt/error.hpp"
#include "gdt/flexscript/number.hpp"

namespace gdt::gen {

using flexscript::Family;

namespace {

// Sources must be slower than every machine by this factor.
constexpr double kStabilityMargin = 1.05;

// Shape ranges for the families that need one.
constexpr Range kLognormalSigma{0.1, 0.5};
constexpr Range kWeibullShape{1.5, 4.0};
constexpr Range kGammaShape{2.0, 8.0};

// Arguments used by the exhaustive enumeration.
constexpr double kFixedSpread = 0.2;

double round2(double x) { return std::round(x * 100.0) / 100.0; }

[[noreturn]] void bad_constraint(const std::string& msg, std::string_view token) {
  throw Error(ErrorCode::InvalidConstraint, msg, std::string(token));
}

template <std::size_t N>
std::size_t pick(dist::Xoshiro256& rng, const std::array<double, N>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

double shape_range_draw(Family f, dist::Xoshiro256& rng) {
  switch (f) {
    case Family::lognormal: return rng.uniform(kLognormalSigma.lo, kLognormalSigma.hi);
    case Family::weibull: return rng.uniform(kWeibullShape.lo, kWeibullShape.hi);
    case Family::gamma: return rng.uniform(kGammaShape.lo, kGammaShape.hi);
    default: return 0.0;
  }
}

double fixed_shape(Family f) {
  switch (f) {
    case Family::lognormal: return 0.25;
    case Family::weibull: return 2.0;
    case Family::gamma: return 4.0;
    default: return 0.0;
  }
}

double max_mean(const std::vector<DistributionExpr>& machines) {
  double m = 0.0;
  for (const auto& d : machines) m = std::max(m, dist::analytic_mean(d));
  return m;
}

// Smallest two-decimal arrival distribution of `family` at or above `target`
// whose mean clears the stability margin.
DistributionExpr stable_source(Family family, double target, double spread, double floor_mean) {
  double mean = std::ceil(std::max(target, kStabilityMargin * floor_mean) * 100.0) / 100.0;
  DistributionExpr d = distribution_for_mean(family, mean, spread, 0.0);
  while (dist::analytic_mean(d) < kStabilityMargin * floor_mean) {
    mean = round2(mean + 0.01);
    d = distribution_for_mean(family, mean, spread, 0.0);
  }
  return d;
}

void fill_speeds(GenSpec& spec, const GenConfig& config) {
  spec.travel_speed = spec.automation == Automation::manual
                          ? 0.0
                          : config.travel_speed[static_cast<std::size_t>(spec.automation)];
  spec.convey_speed = config.convey_speed;
}

std::size_t machine_count(const Constraints& c, std::size_t drawn) {
  return c.n_machines ? *c.n_machines : drawn;
}

}  // namespace

void Constraints::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) bad_constraint("expected key=value", assignment);
  const auto key = assignment.substr(0, eq);
  const auto value = assignment.substr(eq + 1);
  if (key == "layout_type") {
    layout_type = layout_type_from_name(value);
    if (!layout_type) bad_constraint("unknown layout_type", value);
  } else if (key == "automation") {
    automation = automation_from_name(value);
    if (!automation) bad_constraint("unknown automation", value);
  } else if (key == "industry") {
    industry = industry_from_name(value);
    if (!industry) bad_constraint("unknown industry", value);
  } else if (key == "layout_category") {
    layout_category = layout_category_from_name(value);
    if (!layout_category) bad_constraint("unknown layout_category", value);
  } else if (key == "n_machines") {
    const auto n = flexscript::parse_number(value);
    if (!n || *n != std::floor(*n) || *n < kMinMachines || *n > kMaxMachines) {
      bad_constraint("n_machines must be an integer in [1, 6]", value);
    }
    n_machines = static_cast<std::size_t>(*n);
  } else {
    bad_constraint("unknown constraint key", key);
  }
}

std::uint64_t enumerate_combinations(std::size_t n_machines) {
  std::uint64_t total = flexscript::kArrivalFamilies.size();
  for (std::size_t i = 0; i < n_machines; ++i) total *= flexscript::kServiceFamilies.size();
  return total;
}

DistributionExpr distribution_for_mean(Family family, double mean, double spread, double shape) {
  std::vector<double> args;
  switch (family) {
    case Family::constant:
    case Family::exponential:
    case Family::poisson:
      args = {round2(mean)};
      break;
    case Family::normal:
      args = {round2(mean), round2(spread * mean)};
      break;
    case Family::triangular: {
      const double a = mean * (1.0 - spread);
      const double m = mean * (1.0 - spread / 2.0);
      args = {round2(a), round2(m), round2(3.0 * mean - a - m)};
      break;
    }
    case Family::uniform:
      args = {round2(mean * (1.0 - spread)), round2(mean * (1.0 + spread))};
      break;
    case Family::lognormal: {
      const double sigma = round2(shape);
      args = {round2(std::log(mean) - sigma * sigma / 2.0), sigma};
      break;
    }
    case Family::weibull: {
      const double k = round2(shape);
      args = {k, round2(mean / std::tgamma(1.0 + 1.0 / k))};
      break;
    }
    case Family::gamma: {
      const double alpha = round2(shape);
      args = {alpha, round2(mean / alpha)};
      break;
    }
  }
  return flexscript::make_distribution(family, std::move(args));
}

GenSpec sample_spec(std::uint64_t seed, const Constraints& constraints, const GenConfig& config) {
  dist::Xoshiro256 rng(seed);
  GenSpec spec;
  spec.seed = seed;

  const auto layout_type = static_cast<LayoutType>(pick(rng, config.layout_type_weights));
  const auto automation = static_cast<Automation>(pick(rng, config.automation_weights));
  const std::size_t industry = pick(rng, config.industry_weights);
  const auto category = static_cast<LayoutCategory>(pick(rng, config.layout_category_weights));
  const std::size_t drawn_n =
      config.machines_min + rng.below(config.machines_max - config.machines_min + 1);

  spec.layout_type = constraints.layout_type.value_or(layout_type);
  spec.automation = constraints.automation.value_or(automation);
  spec.industry = constraints.industry.value_or(industry);
  spec.layout_category = constraints.layout_category.value_or(category);
  spec.n_machines = machine_count(constraints, drawn_n);

  const Family source_family = flexscript::kArrivalFamilies[rng.below(flexscript::kArrivalFamilies.size())];
  std::vector<Family> machine_families(spec.n_machines);
  for (auto& f : machine_families) {
    f = flexscript::kServiceFamilies[rng.below(flexscript::kServiceFamilies.size())];
  }

  const IndustryProfile& profile = config.industries[spec.industry];
  for (Family f : machine_families) {
    const double mean = rng.uniform(profile.service_mean.lo, profile.service_mean.hi);
    const double spread = rng.uniform(0.05, profile.variability);
    const double shape = shape_range_draw(f, rng);
    spec.machine_dists.push_back(distribution_for_mean(f, mean, spread, shape));
  }
  const double arrival = rng.uniform(profile.arrival_mean.lo, profile.arrival_mean.hi);
  const double spread = rng.uniform(0.05, profile.variability);
  spec.source_dist = stable_source(source_family, arrival, spread, max_mean(spec.machine_dists));
  fill_speeds(spec, config);
  return spec;
}

GenSpec enumerate_spec(std::uint64_t index, std::uint64_t seed, const Constraints& constraints,
                       const GenConfig& config) {
  if (!constraints.all_layers_fixed()) {
    bad_constraint("exhaustive mode needs layout_type, automation, industry and layout_category fixed",
                   "");
  }
  GenSpec spec;
  spec.seed = seed;
  spec.layout_type = *constraints.layout_type;
  spec.automation = *constraints.automation;
  spec.industry = *constraints.industry;
  spec.layout_category = *constraints.layout_category;
  spec.n_machines = constraints.n_machines.value_or(3);
  if (index >= enumerate_combinations(spec.n_machines)) {
    bad_constraint("index beyond the combination count", std::to_string(index));
  }

  const IndustryProfile& profile = config.industries[spec.industry];
  const double service = round2((profile.service_mean.lo + profile.service_mean.hi) / 2.0);
  const double arrival = round2((profile.arrival_mean.lo + profile.arrival_mean.hi) / 2.0);

  const Family source_family = flexscript::kArrivalFamilies[index % flexscript::kArrivalFamilies.size()];
  std::uint64_t rest = index / flexscript::kArrivalFamilies.size();
  for (std::size_t i = 0; i < spec.n_machines; ++i) {
    const Family f = flexscript::kServiceFamilies[rest % flexscript::kServiceFamilies.size()];
    rest /= flexscript::kServiceFamilies.size();
    spec.machine_dists.push_back(distribution_for_mean(f, service, kFixedSpread, fixed_shape(f)));
  }
  spec.source_dist = stable_source(source_family, arrival, kFixedSpread, max_mean(spec.machine_dists));
  fill_speeds(spec, config);
  return spec;
}

}  // namespace gdt::gen
