#include "gdt/metrics/structural.hpp"

#include <cmath>
#include <set>
#include <tuple>

#include "gdt/error.hpp"

namespace gdt::metrics {

namespace {

using Triple = std::tuple<std::string, std::string, flexscript::PortKind>;

std::set<Triple> connection_set(const Script& s) {
  std::set<Triple> out;
  for (const auto& c : s.connections) out.emplace(c.from, c.to, c.port);
  return out;
}

}  // namespace

void SvrWeights::validate() const {
  if (!(cs >= 0.0) || !(os >= 0.0) || std::fabs(cs + os - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "SVR weights must be nonnegative and sum to 1");
  }
}

ConnectionScore connection_score(const Script& generated, const Script& truth) {
  const auto want = connection_set(truth);
  if (want.empty()) throw Error(ErrorCode::EmptyReference, "reference has no connections");
  const auto have = connection_set(generated);
  ConnectionScore r;
  r.total = want.size();
  for (const auto& t : want) r.matched += have.count(t);
  r.cs = static_cast<double>(r.matched) / static_cast<double>(r.total);
  return r;
}

ObjectScore object_score(const Script& generated, const Script& truth) {
  if (truth.decls.empty()) throw Error(ErrorCode::EmptyReference, "reference declares no objects");
  ObjectScore r;
  r.required = truth.decls.size();
  for (const auto& want : truth.decls) {
    const auto* have = generated.find(want.name);
    if (have && have->type == want.type) ++r.valid;
  }
  r.os = static_cast<double>(r.valid) / static_cast<double>(r.required);
  return r;
}

double svr(double cs, double os, const SvrWeights& weights) {
  return weights.cs * cs + weights.os * os;
}

StructuralScore structural_score(const Script& generated, const Script& truth,
                                 const SvrWeights& weights) {
  const auto c = connection_score(generated, truth);
  const auto o = object_score(generated, truth);
  StructuralScore s;
  s.cs = c.cs;
  s.os = o.os;
  s.svr = svr(c.cs, o.os, weights);
  s.n_truth_connections = c.total;
  s.m_matched_connections = c.matched;
  s.k_required_objects = o.required;
  s.k_valid_objects = o.valid;
  return s;
}

}  // namespace gdt::metrics
