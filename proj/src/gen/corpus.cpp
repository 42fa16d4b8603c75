#include "gdt/gen/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gdt/dist/rng.hpp"
#include "gdt/error.hpp"
#include "gdt/gen/render.hpp"
#include "gdt/sim/engine.hpp"

namespace gdt::gen {

namespace {

constexpr std::size_t kChunk = 2048;

nlohmann::ordered_json metadata(const GenSpec& spec) {
  nlohmann::ordered_json m;
  m["layout_type"] = name(spec.layout_type);
  m["automation"] = name(spec.automation);
  m["industry"] = kIndustries[spec.industry].name;
  m["industry_placeholder"] = kIndustries[spec.industry].placeholder;
  m["layout_category"] = name(spec.layout_category);
  m["n_machines"] = spec.n_machines;
  m["source_dist"] = flexscript::to_string(spec.source_dist);
  auto& md = m["machine_dists"] = nlohmann::ordered_json::array();
  for (const auto& d : spec.machine_dists) md.push_back(flexscript::to_string(d));
  if (spec.automation != Automation::manual) m["travel_speed"] = spec.travel_speed;
  m["convey_speed"] = spec.convey_speed;
  return m;
}

void verify_record(const TripletRecord& r, double horizon) {
  const auto outcome = sim::exec_outcome(r.code, horizon, r.seed);
  if (!outcome.success) {
    throw Error(ErrorCode::InvalidConfig,
                r.id + " does not execute: " + outcome.label() + " " + outcome.detail);
  }
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

std::string record_id(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gdt-%06llu", static_cast<unsigned long long>(index));
  return buf;
}

TripletRecord make_record(std::uint64_t index, std::uint64_t master_seed,
                          const Constraints& constraints, const GenConfig& config,
                          bool exhaustive) {
  TripletRecord r;
  r.id = record_id(index);
  r.seed = dist::derive_seed(master_seed, index);
  r.spec = exhaustive ? enumerate_spec(index, r.seed, constraints, config)
                      : sample_spec(r.seed, constraints, config);
  r.code = emit_code(r.spec);
  r.sketch = render_sketch(r.spec);
  r.prompt = render_prompt(r.spec);
  return r;
}

std::string metadata_json(const GenSpec& spec) { return metadata(spec).dump(); }

std::string manifest_line(const TripletRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["prompt"] = r.prompt;
  j["sketch_path"] = "sketches/" + r.id + ".svg";
  j["code"] = r.code;
  j["metadata"] = metadata(r.spec);
  j["seed"] = r.seed;
  return j.dump();
}

CorpusSummary generate_corpus(const CorpusOptions& opt) {
  opt.config.validate();
  if (opt.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  if (opt.exhaustive) {
    if (!opt.constraints.all_layers_fixed()) {
      throw Error(ErrorCode::InvalidConstraint,
                  "exhaustive mode needs layout_type, automation, industry and layout_category fixed");
    }
    const auto total = enumerate_combinations(opt.constraints.n_machines.value_or(3));
    if (opt.count > total) {
      throw Error(ErrorCode::InvalidConstraint,
                  "count " + std::to_string(opt.count) + " exceeds " + std::to_string(total) +
                      " combinations");
    }
  }

  const auto sketches = opt.out / "sketches";
  std::error_code ec;
  std::filesystem::create_directories(sketches, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + sketches.string() + ": " + ec.message());

  CorpusSummary summary;
  summary.manifest = opt.out / "manifest.jsonl";
  std::ofstream manifest(summary.manifest, std::ios::binary);
  if (!manifest) throw Error(ErrorCode::IoError, "cannot write " + summary.manifest.string());

  const std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  std::vector<TripletRecord> chunk;
  for (std::size_t base = 0; base < opt.count; base += kChunk) {
    const std::size_t n = std::min(kChunk, opt.count - base);
    chunk.assign(n, {});
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](std::size_t worker) {
      try {
        for (std::size_t i = next++; i < n; i = next++) {
          chunk[i] = make_record(base + i, opt.seed, opt.constraints, opt.config, opt.exhaustive);
          if (opt.verify) verify_record(chunk[i], opt.verify_horizon);
          write_file(sketches / (chunk[i].id + ".svg"), chunk[i].sketch);
        }
      } catch (...) {
        errors[worker] = std::current_exception();
        next = n;
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto& r : chunk) {
      manifest << manifest_line(r) << '\n';
      ++summary.records;
      ++summary.layout_type[std::string(name(r.spec.layout_type))];
      ++summary.automation[std::string(name(r.spec.automation))];
      ++summary.industry[std::string(kIndustries[r.spec.industry].name)];
      ++summary.layout_category[std::string(name(r.spec.layout_category))];
      ++summary.source_family[std::string(flexscript::family_name(r.spec.source_dist.family))];
      for (const auto& d : r.spec.machine_dists) {
        ++summary.machine_family[std::string(flexscript::family_name(d.family))];
      }
    }
    if (!manifest) throw Error(ErrorCode::IoError, "cannot write " + summary.manifest.string());
  }
  manifest.flush();
  if (!manifest) throw Error(ErrorCode::IoError, "cannot write " + summary.manifest.string());
  return summary;
}

std::string summary_text(const CorpusSummary& s) {
  std::ostringstream out;
  out << "records: " << s.records << "\nmanifest: " << s.manifest.string() << "\n";
  auto layer = [&](const char* title, const std::map<std::string, std::size_t>& counts,
                   std::size_t denom) {
    out << title << ":\n";
    for (const auto& [k, v] : counts) {
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.2f", denom ? 100.0 * static_cast<double>(v) / static_cast<double>(denom) : 0.0);
      out << "  " << k << ": " << v << " (" << pct << "%)\n";
    }
  };
  layer("layout_type", s.layout_type, s.records);
  layer("automation", s.automation, s.records);
  layer("industry", s.industry, s.records);
  layer("layout_category", s.layout_category, s.records);
  layer("source_family", s.source_family, s.records);
  std::size_t machines = 0;
  for (const auto& [k, v] : s.machine_family) machines += v;
  layer("machine_family", s.machine_family, machines);
  return out.str();
}

}  // namespace gdt::gen
