// gdt: parse, score, simulate and generate FlexScript layouts.
//
// Exit codes: 0 success, 1 validation or parse failure, 2 usage error,
// 3 I/O error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdt/error.hpp"
#include "gdt/flexscript/number.hpp"
#include "gdt/flexscript/parser.hpp"
#include "gdt/gen/config.hpp"
#include "gdt/gen/corpus.hpp"
#include "gdt/metrics/report.hpp"
#include "gdt/sim/engine.hpp"

namespace fs = std::filesystem;
using namespace gdt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 0;
  double horizon = sim::kDefaultHorizon;
  std::string weights = "0.6,0.4";
  std::string metrics = "all";
  std::string format = "json";
  std::size_t jobs = 1;
  std::string out;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to --out when given, stdout otherwise.
void emit(const Globals& g, const std::string& body) {
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  out << body;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + g.out);
}

metrics::SvrWeights parse_weights(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--weights", "expected cs,os");
  const auto cs = flexscript::parse_number(text.substr(0, comma));
  const auto os = flexscript::parse_number(text.substr(comma + 1));
  if (!cs || !os) throw CLI::ValidationError("--weights", "expected two numbers");
  metrics::SvrWeights w{*cs, *os};
  try {
    w.validate();
  } catch (const Error& e) {
    throw CLI::ValidationError("--weights", e.what());
  }
  return w;
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      errors[w] = std::current_exception();
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
}

// -- parse ----------------------------------------------------------------

int cmd_parse(const Globals& g, const std::string& file) {
  const std::string text = read_file(file);
  const auto script = flexscript::parse(text);
  const char* status = script.empty()                ? "ParseEmpty"
                       : !script.parse_errors.empty() ? "ParseError"
                                                      : "ok";
  nlohmann::ordered_json j;
  j["file"] = file;
  j["status"] = status;
  j["decls"] = script.decls.size();
  j["params"] = script.params.size();
  j["connections"] = script.connections.size();
  j["recognized_statements"] = script.recognized_statements;
  j["unknown_statements"] = script.unknown_statements;
  auto& errs = j["parse_errors"] = nlohmann::ordered_json::array();
  for (const auto& e : script.parse_errors) errs.push_back({{"line", e.line}, {"message", e.message}});
  auto& diags = j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : script.diagnostics) {
    diags.push_back({{"kind", d.kind == flexscript::DiagnosticKind::DuplicateDeclaration
                                  ? "DuplicateDeclaration"
                                  : "DanglingReference"},
                     {"line", d.line},
                     {"message", d.message}});
  }
  emit(g, j.dump(2) + "\n");
  return std::string_view(status) == "ok" ? kExitOk : kExitFailure;
}

// -- score ----------------------------------------------------------------

struct Pair {
  std::string id;
  fs::path ref;
  fs::path hyp;
};

std::vector<Pair> pairs_from_dirs(const fs::path& refs, const fs::path& hyps) {
  auto list = [](const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
    std::map<std::string, fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file()) files.emplace(e.path().filename().string(), e.path());
    }
    return files;
  };
  const auto r = list(refs);
  const auto h = list(hyps);
  std::vector<Pair> out;
  std::vector<std::string> unmatched;
  for (const auto& [name, path] : r) {
    const auto it = h.find(name);
    if (it == h.end()) unmatched.push_back(name + " (no hypothesis)");
    else out.push_back({name, path, it->second});
  }
  for (const auto& [name, path] : h) {
    if (!r.count(name)) unmatched.push_back(name + " (no reference)");
  }
  if (!unmatched.empty()) {
    std::string msg = "unmatched ids:";
    for (const auto& u : unmatched) msg += " " + u;
    throw Error(ErrorCode::MissingPair, msg);
  }
  return out;
}

// Two whitespace-separated columns per line: reference path, hypothesis
// path, both relative to the pairs file. '#' starts a comment line.
std::vector<Pair> pairs_from_file(const fs::path& file) {
  std::istringstream in(read_file(file));
  const fs::path base = file.parent_path();
  std::vector<Pair> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::string ref, hyp, extra;
    if (!(row >> ref) || ref.front() == '#') continue;
    if (!(row >> hyp) || (row >> extra)) {
      throw Error(ErrorCode::MissingPair,
                  file.string() + ":" + std::to_string(lineno) + ": expected two columns");
    }
    const fs::path rp = fs::path(ref).is_absolute() ? fs::path(ref) : base / ref;
    const fs::path hp = fs::path(hyp).is_absolute() ? fs::path(hyp) : base / hyp;
    out.push_back({rp.filename().string(), rp, hp});
  }
  std::sort(out.begin(), out.end(), [](const Pair& a, const Pair& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].id == out[i - 1].id) throw Error(ErrorCode::InvalidArgument, "duplicate id " + out[i].id);
  }
  return out;
}

int cmd_score(const Globals& g, const std::string& refs, const std::string& hyps,
              const std::string& pairs_file) {
  const auto weights = parse_weights(g.weights);
  const auto selection = metrics::MetricSelection::parse(g.metrics);
  std::vector<Pair> pairs;
  if (!pairs_file.empty()) {
    pairs = pairs_from_file(pairs_file);
  } else {
    pairs = pairs_from_dirs(refs, hyps);
  }
  if (pairs.empty()) throw Error(ErrorCode::EmptyBatch, "nothing to score");

  std::vector<std::optional<metrics::SampleRecord>> records(pairs.size());
  parallel_for(pairs.size(), g.jobs, [&](std::size_t i) {
    const std::string ref_text = read_file(pairs[i].ref);
    const std::string hyp_text = read_file(pairs[i].hyp);
    const auto ref = flexscript::parse(ref_text);
    const auto hyp = flexscript::parse(hyp_text);
    const ExecOutcome outcome =
        selection.esr ? sim::exec_outcome(hyp_text, g.horizon, g.seed) : ExecOutcome::ok();
    records[i] = metrics::score_pair(pairs[i].id, {hyp, hyp_text}, {ref, ref_text}, outcome, weights);
  });
  std::vector<metrics::SampleRecord> samples;
  samples.reserve(records.size());
  for (auto& r : records) samples.push_back(std::move(*r));
  const auto report = metrics::aggregate(std::move(samples));
  emit(g, g.format == "csv" ? metrics::to_csv(report, selection) : metrics::to_json(report, selection));
  return kExitOk;
}

// -- simulate -------------------------------------------------------------

int cmd_simulate(const Globals& g, const std::string& file, const std::string& trace_path) {
  const std::string text = read_file(file);
  sim::RunOptions opts;
  opts.horizon = g.horizon;
  opts.seed = g.seed;
  std::ofstream trace_file;
  if (trace_path == "-") {
    opts.trace = &std::cerr;
  } else if (!trace_path.empty()) {
    trace_file.open(trace_path, std::ios::binary);
    if (!trace_file) throw Error(ErrorCode::IoError, "cannot write " + trace_path);
    opts.trace = &trace_file;
  }
  const auto result = sim::execute(text, opts);
  if (trace_file.is_open()) {
    trace_file.flush();
    if (!trace_file) throw Error(ErrorCode::IoError, "cannot write " + trace_path);
  }
  emit(g, sim::stats_json(result));
  return result.outcome.success ? kExitOk : kExitFailure;
}

// -- generate -------------------------------------------------------------

struct GenerateArgs {
  std::optional<std::size_t> count;
  std::vector<std::string> constraints;
  bool exhaustive = false;
  bool verify = false;
  std::string config;
};

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  gen::CorpusOptions opt;
  opt.seed = g.seed;
  opt.jobs = g.jobs;
  if (g.out.empty()) throw CLI::RequiredError("--out");
  opt.out = g.out;
  opt.exhaustive = a.exhaustive;
  opt.verify = a.verify;
  opt.verify_horizon = g.horizon;
  if (!a.config.empty()) opt.config = gen::load_config(a.config);
  for (const auto& c : a.constraints) opt.constraints.set(c);
  if (a.count) {
    opt.count = *a.count;
  } else if (a.exhaustive) {
    opt.count = gen::enumerate_combinations(opt.constraints.n_machines.value_or(3));
  } else {
    throw CLI::RequiredError("--count");
  }
  const auto summary = gen::generate_corpus(opt);
  std::cout << gen::summary_text(summary);
  return kExitOk;
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::IoError ? kExitIo : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parse, score, simulate and generate FlexScript factory layouts"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "gdt 1.0.0");

  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->envname("GDT_SEED");
  app.add_option("--horizon", g.horizon, "Simulation horizon (time units)")
      ->envname("GDT_HORIZON")
      ->check(CLI::PositiveNumber);
  app.add_option("--weights", g.weights, "SVR weights cs,os")
      ->envname("GDT_WEIGHTS")
      ->check([](const std::string& v) {
        try {
          parse_weights(v);
        } catch (const CLI::ValidationError& e) {
          return std::string(e.what());
        }
        return std::string();
      });
  app.add_option("--metrics", g.metrics, "Subset of svr,pmr,esr,bleu or all")
      ->envname("GDT_METRICS")
      ->check([](const std::string& v) {
        try {
          metrics::MetricSelection::parse(v);
        } catch (const Error& e) {
          return std::string(e.what());
        }
        return std::string();
      });
  app.add_option("--format", g.format, "Report format")
      ->envname("GDT_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", g.jobs, "Worker threads")->envname("GDT_JOBS")->check(CLI::Range(1, 1024));
  app.add_option("--out", g.out, "Output file (directory for generate)")->envname("GDT_OUT");

  std::string parse_file;
  auto* parse = app.add_subcommand("parse", "Report what a script declares");
  parse->add_option("file", parse_file)->required();

  std::string refs, hyps, pairs;
  auto* score = app.add_subcommand("score", "Score hypotheses against references");
  auto* refs_opt = score->add_option("--refs", refs, "Reference directory");
  auto* hyps_opt = score->add_option("--hyps", hyps, "Hypothesis directory");
  auto* pairs_opt = score->add_option("--pairs", pairs, "Two-column file of reference/hypothesis paths");
  refs_opt->needs(hyps_opt)->excludes(pairs_opt);
  hyps_opt->needs(refs_opt)->excludes(pairs_opt);
  score->callback([&] {
    if (pairs.empty() && refs.empty()) throw CLI::RequiredError("--refs/--hyps or --pairs");
  });

  std::string sim_file, trace;
  auto* simulate = app.add_subcommand("simulate", "Run a script in the simulation engine");
  simulate->add_option("file", sim_file)->required();
  simulate->add_option("--trace", trace, "Event trace file ('-' for stderr)");

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Write a prompt/sketch/code corpus");
  generate->add_option("--count", gen_args.count, "Number of records")->check(CLI::PositiveNumber);
  generate->add_option("--constraint", gen_args.constraints, "Fix a layer: key=value (repeatable)");
  generate->add_flag("--exhaustive", gen_args.exhaustive,
                     "Enumerate every family combination with fixed arguments");
  generate->add_flag("--verify", gen_args.verify, "Execute every record before writing it");
  generate->add_option("--config", gen_args.config, "INI configuration")->envname("GDT_CONFIG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  // CLI11 drops an environment value that fails validation instead of
  // reporting it; treat that as a usage error like the matching flag.
  for (const CLI::Option* opt : app.get_options()) {
    const std::string& env = opt->get_envname();
    if (env.empty() || opt->count() > 0) continue;
    if (const char* v = std::getenv(env.c_str()); v && *v) {
      std::cerr << env << ": invalid value '" << v << "'\n";
      return kExitUsage;
    }
  }

  try {
    if (*parse) return cmd_parse(g, parse_file);
    if (*score) return cmd_score(g, refs, hyps, pairs);
    if (*simulate) return cmd_simulate(g, sim_file, trace);
    if (*generate) return cmd_generate(g, gen_args);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "gdt: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "gdt: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
