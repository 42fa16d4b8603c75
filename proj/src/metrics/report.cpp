#include "gdt/metrics/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gdt/error.hpp"
#include "gdt/flexscript/number.hpp"

namespace gdt::metrics {

using flexscript::type_path;
using nlohmann::ordered_json;

double esr(std::span<const ExecOutcome> outcomes) {
  if (outcomes.empty()) throw Error(ErrorCode::EmptyBatch, "no execution outcomes");
  const auto successes = std::count_if(outcomes.begin(), outcomes.end(),
                                       [](const ExecOutcome& o) { return o.success; });
  return static_cast<double>(successes) / static_cast<double>(outcomes.size());
}

namespace {

PairDiagnostics diagnose(const flexscript::Script& gen, const flexscript::Script& truth) {
  PairDiagnostics d;
  std::set<std::tuple<std::string, std::string, flexscript::PortKind>> have;
  for (const auto& c : gen.connections) have.emplace(c.from, c.to, c.port);
  std::set<std::tuple<std::string, std::string, flexscript::PortKind>> seen;
  for (const auto& c : truth.connections) {
    auto key = std::make_tuple(c.from, c.to, c.port);
    if (!have.count(key) && seen.insert(key).second) d.missing_connections.push_back(c);
  }
  for (const auto& want : truth.decls) {
    const auto* got = gen.find(want.name);
    if (!got) {
      d.missing_objects.push_back(want.name);
    } else if (got->type != want.type) {
      d.type_mismatches.push_back({want.name, want.type, got->type});
    }
  }
  d.mismatched_params = mismatched_params(gen, truth);
  std::set<std::string> undeclared;
  for (const auto& c : gen.connections) {
    for (const auto* name : {&c.from, &c.to}) {
      if (!gen.find(*name) && undeclared.insert(*name).second) {
        d.undeclared_connected.push_back(*name);
      }
    }
  }
  return d;
}

}  // namespace

SampleRecord score_pair(std::string id, const ScoredSource& generated, const ScoredSource& truth,
                        ExecOutcome exec, const SvrWeights& weights) {
  if (!truth.script.parse_errors.empty()) {
    throw Error(ErrorCode::InvalidArgument, "reference '" + id + "' has parse errors");
  }
  SampleRecord rec;
  rec.id = std::move(id);
  rec.structural = structural_score(generated.script, truth.script, weights);
  rec.params = pmr(generated.script, truth.script);
  rec.outcome = std::move(exec);

  std::vector<std::vector<std::string>> refs{bleu_tokenize(truth.text)};
  rec.bleu_stats = bleu_stats(bleu_tokenize(generated.text), refs);
  rec.bleu4 = bleu_from_stats(rec.bleu_stats);
  rec.diagnostics = diagnose(generated.script, truth.script);
  return rec;
}

CorpusReport aggregate(std::vector<SampleRecord> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyBatch, "no samples to aggregate");
  std::sort(samples.begin(), samples.end(),
            [](const SampleRecord& a, const SampleRecord& b) { return a.id < b.id; });
  CorpusReport report;
  auto& agg = report.aggregates;
  agg.samples = samples.size();
  BleuStats bleu;
  std::vector<ExecOutcome> outcomes;
  outcomes.reserve(samples.size());
  for (const auto& s : samples) {
    agg.mean_cs += s.structural.cs;
    agg.mean_os += s.structural.os;
    agg.mean_svr += s.structural.svr;
    agg.mean_pmr += s.params.pmr;
    if (s.outcome.success) ++agg.successes;
    outcomes.push_back(s.outcome);
    bleu += s.bleu_stats;
  }
  const double n = static_cast<double>(samples.size());
  agg.mean_cs /= n;
  agg.mean_os /= n;
  agg.mean_svr /= n;
  agg.mean_pmr /= n;
  agg.esr = esr(outcomes);
  agg.corpus_bleu4 = bleu_from_stats(bleu);
  report.samples = std::move(samples);
  return report;
}

MetricSelection MetricSelection::parse(std::string_view list) {
  if (list.empty() || list == "all") return {};
  MetricSelection m{false, false, false, false};
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view item = list.substr(start, end - start);
    if (item == "svr") m.svr = true;
    else if (item == "pmr") m.pmr = true;
    else if (item == "esr") m.esr = true;
    else if (item == "bleu" || item == "bleu4") m.bleu = true;
    else throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(item) + "'");
    start = end + 1;
  }
  return m;
}

namespace {

ordered_json sample_json(const SampleRecord& s, const MetricSelection& m) {
  ordered_json j;
  j["id"] = s.id;
  if (m.svr) {
    j["cs"] = s.structural.cs;
    j["os"] = s.structural.os;
    j["svr"] = s.structural.svr;
    j["n_truth_connections"] = s.structural.n_truth_connections;
    j["m_matched_connections"] = s.structural.m_matched_connections;
    j["k_required_objects"] = s.structural.k_required_objects;
    j["k_valid_objects"] = s.structural.k_valid_objects;
  }
  if (m.pmr) {
    j["pmr"] = s.params.pmr;
    j["p_total"] = s.params.p_total;
    j["p_match"] = s.params.p_match;
  }
  if (m.esr) {
    j["exec_outcome"] = s.outcome.label();
    if (!s.outcome.success && !s.outcome.detail.empty()) j["exec_detail"] = s.outcome.detail;
  }
  if (m.bleu) j["bleu4"] = s.bleu4;

  ordered_json diag;
  auto& missing = diag["missing_connections"] = ordered_json::array();
  for (const auto& c : s.diagnostics.missing_connections) {
    missing.push_back({c.from, c.to, std::string(flexscript::port_code(c.port))});
  }
  diag["missing_objects"] = s.diagnostics.missing_objects;
  auto& types = diag["type_mismatches"] = ordered_json::array();
  for (const auto& t : s.diagnostics.type_mismatches) {
    types.push_back({{"name", t.name},
                     {"expected", std::string(type_path(t.expected))},
                     {"actual", std::string(type_path(t.actual))}});
  }
  auto& params = diag["mismatched_params"] = ordered_json::array();
  for (const auto& [object, name] : s.diagnostics.mismatched_params) {
    params.push_back({object, name});
  }
  diag["undeclared_connected"] = s.diagnostics.undeclared_connected;
  j["diagnostics"] = std::move(diag);
  return j;
}

}  // namespace

std::string to_json(const CorpusReport& report, const MetricSelection& m) {
  const auto& a = report.aggregates;
  ordered_json j;
  j["schema"] = kReportSchema;
  ordered_json metrics = ordered_json::array();
  if (m.svr) metrics.push_back("svr");
  if (m.pmr) metrics.push_back("pmr");
  if (m.esr) metrics.push_back("esr");
  if (m.bleu) metrics.push_back("bleu4");
  j["metrics"] = std::move(metrics);
  ordered_json agg;
  agg["samples"] = a.samples;
  if (m.svr) {
    agg["mean_cs"] = a.mean_cs;
    agg["mean_os"] = a.mean_os;
    agg["mean_svr"] = a.mean_svr;
  }
  if (m.pmr) agg["mean_pmr"] = a.mean_pmr;
  if (m.esr) {
    agg["successes"] = a.successes;
    agg["esr"] = a.esr;
  }
  if (m.bleu) agg["corpus_bleu4"] = a.corpus_bleu4;
  j["aggregates"] = std::move(agg);
  ordered_json samples = ordered_json::array();
  for (const auto& s : report.samples) samples.push_back(sample_json(s, m));
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) { return flexscript::format_number(v); }

}  // namespace

std::string to_csv(const CorpusReport& report, const MetricSelection& m) {
  std::ostringstream out;
  out << "id";
  if (m.svr) out << ",cs,os,svr,n_truth_connections,m_matched_connections,k_required_objects,k_valid_objects";
  if (m.pmr) out << ",pmr,p_total,p_match";
  if (m.esr) out << ",exec_outcome";
  if (m.bleu) out << ",bleu4";
  out << "\n";
  for (const auto& s : report.samples) {
    out << csv_field(s.id);
    if (m.svr) {
      const auto& st = s.structural;
      out << ',' << num(st.cs) << ',' << num(st.os) << ',' << num(st.svr) << ','
          << st.n_truth_connections << ',' << st.m_matched_connections << ','
          << st.k_required_objects << ',' << st.k_valid_objects;
    }
    if (m.pmr) out << ',' << num(s.params.pmr) << ',' << s.params.p_total << ',' << s.params.p_match;
    if (m.esr) out << ',' << s.outcome.label();
    if (m.bleu) out << ',' << num(s.bleu4);
    out << "\n";
  }
  return out.str();
}

}  // namespace gdt::metrics
