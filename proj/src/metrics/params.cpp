#include "gdt/metrics/params.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gdt/error.hpp"

namespace gdt::metrics {

using flexscript::DistributionExpr;
using flexscript::ParamValue;

namespace {

std::map<ParamKey, const ParamValue*> last_assignments(const flexscript::Script& s) {
  std::map<ParamKey, const ParamValue*> out;
  for (const auto& p : s.params) out[{p.object, p.name}] = &p.value;
  return out;
}

}  // namespace

bool numbers_match(double a, double b, double rel_tolerance) {
  if (a == b) return true;
  return std::fabs(a - b) <= rel_tolerance * std::max(std::fabs(a), std::fabs(b));
}

bool values_match(const ParamValue& a, const ParamValue& b, double rel_tolerance) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<double>(&a)) {
    return numbers_match(*x, std::get<double>(b), rel_tolerance);
  }
  const auto& da = std::get<DistributionExpr>(a);
  const auto& db = std::get<DistributionExpr>(b);
  if (da.family != db.family || da.args.size() != db.args.size()) return false;
  for (std::size_t i = 0; i < da.args.size(); ++i) {
    if (!numbers_match(da.args[i], db.args[i], rel_tolerance)) return false;
  }
  return true;
}

ParamScore pmr(const flexscript::Script& generated, const flexscript::Script& truth) {
  const auto want = last_assignments(truth);
  if (want.empty()) throw Error(ErrorCode::EmptyReference, "reference has no parameters");
  const auto have = last_assignments(generated);
  ParamScore r;
  r.p_total = want.size();
  for (const auto& [key, value] : want) {
    auto it = have.find(key);
    if (it != have.end() && values_match(*value, *it->second)) ++r.p_match;
  }
  r.pmr = static_cast<double>(r.p_match) / static_cast<double>(r.p_total);
  return r;
}

std::vector<ParamKey> mismatched_params(const flexscript::Script& generated,
                                        const flexscript::Script& truth) {
  const auto want = last_assignments(truth);
  const auto have = last_assignments(generated);
  std::vector<ParamKey> out;
  for (const auto& [key, value] : want) {
    auto it = have.find(key);
    if (it == have.end() || !values_match(*value, *it->second)) out.push_back(key);
  }
  return out;
}

}  // namespace gdt::metrics
