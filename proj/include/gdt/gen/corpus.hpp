#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "gdt/gen/config.hpp"
#include "gdt/gen/spec.hpp"

namespace gdt::gen {

struct TripletRecord {
  std::string id;  // gdt-000042
  std::string prompt;
  std::string sketch;
  std::string code;
  GenSpec spec;
  std::uint64_t seed = 0;
};

std::string record_id(std::uint64_t index);

// Record `index` of the corpus under `master_seed`.
TripletRecord make_record(std::uint64_t index, std::uint64_t master_seed,
                          const Constraints& constraints, const GenConfig& config,
                          bool exhaustive = false);

// metadata object of a manifest line.
std::string metadata_json(const GenSpec& spec);

// One manifest line (no trailing newline); sketch_path is relative to the
// manifest.
std::string manifest_line(const TripletRecord& record);

struct CorpusOptions {
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  Constraints constraints;
  GenConfig config = GenConfig::defaults();
  bool exhaustive = false;
  // Run every record through the engine before writing it; a failure throws
  // gdt::Error(InvalidConfig).
  bool verify = false;
  double verify_horizon = 10000.0;
  std::size_t jobs = 1;
};

// Per-layer record counts, keyed by layer value name.
struct CorpusSummary {
  std::size_t records = 0;
  std::map<std::string, std::size_t> layout_type;
  std::map<std::string, std::size_t> automation;
  std::map<std::string, std::size_t> industry;
  std::map<std::string, std::size_t> layout_category;
  std::map<std::string, std::size_t> source_family;
  std::map<std::string, std::size_t> machine_family;
  std::filesystem::path manifest;
};

/// Writes <out>/manifest.jsonl and <out>/sketches/<id>.svg. Output is
/// identical for any `jobs`. Throws gdt::Error(IoError) on write failure and
/// InvalidConstraint for an exhaustive run without fixed layers or with a
/// count above the combination total.
CorpusSummary generate_corpus(const CorpusOptions& options);

std::string summary_text(const CorpusSummary& summary);

}  // namespace gdt::gen
