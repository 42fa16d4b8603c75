#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdt/flexscript/ast.hpp"
#include "gdt/metrics/bleu.hpp"
#include "gdt/metrics/params.hpp"
#include "gdt/metrics/structural.hpp"
#include "gdt/outcome.hpp"

namespace gdt::metrics {

inline constexpr std::string_view kReportSchema = "gdt.score-report/1";

/// Execution success rate: successes over samples. Throws
/// gdt::Error(EmptyBatch) for an empty batch.
double esr(std::span<const ExecOutcome> outcomes);

struct TypeMismatch {
  std::string name;
  flexscript::ObjectType expected;
  flexscript::ObjectType actual;
};

struct PairDiagnostics {
  std::vector<flexscript::Connection> missing_connections;
  std::vector<std::string> missing_objects;
  std::vector<TypeMismatch> type_mismatches;
  std::vector<ParamKey> mismatched_params;
  // Objects used in generated connections but not declared there.
  std::vector<std::string> undeclared_connected;
};

struct SampleRecord {
  std::string id;
  StructuralScore structural;
  ParamScore params;
  ExecOutcome outcome;
  double bleu4 = 0.0;
  BleuStats bleu_stats;
  PairDiagnostics diagnostics;
};

// A script together with the text it was parsed from.
struct ScoredSource {
  const flexscript::Script& script;
  std::string_view text;
};

/// Scores one generated sample against its reference. The reference must be
/// free of parse errors (gdt::Error(InvalidArgument) otherwise);
/// EmptyReference errors from the individual metrics propagate. An empty
/// generated text scores BLEU 0.
SampleRecord score_pair(std::string id, const ScoredSource& generated,
                        const ScoredSource& truth, ExecOutcome exec,
                        const SvrWeights& weights = {});

struct CorpusAggregates {
  std::size_t samples = 0;
  std::size_t successes = 0;
  double mean_cs = 0.0;
  double mean_os = 0.0;
  double mean_svr = 0.0;
  double mean_pmr = 0.0;
  double esr = 0.0;
  double corpus_bleu4 = 0.0;
};

struct CorpusReport {
  std::vector<SampleRecord> samples;  // ordered by id
  CorpusAggregates aggregates;
};

/// Orders samples by id and computes the aggregates, so the result does not
/// depend on the order in which samples were scored. Throws
/// gdt::Error(EmptyBatch) when there are no samples.
CorpusReport aggregate(std::vector<SampleRecord> samples);

struct MetricSelection {
  bool svr = true;
  bool pmr = true;
  bool esr = true;
  bool bleu = true;

  // Comma-separated subset of "svr,pmr,esr,bleu" (or "all").
  static MetricSelection parse(std::string_view list);
};

// JSON object {schema, metrics, aggregates, samples}.
std::string to_json(const CorpusReport& report, const MetricSelection& metrics = {});

// Header row plus one row per sample.
std::string to_csv(const CorpusReport& report, const MetricSelection& metrics = {});

}  // namespace gdt::metrics
