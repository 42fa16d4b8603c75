#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <set>

#include "gdt/dist/moments.hpp"
#include "gdt/dist/rng.hpp"
#include "gdt/error.hpp"
#include "gdt/flexscript/emit.hpp"
#include "gdt/flexscript/parser.hpp"
#include "gdt/gen/corpus.hpp"
#include "gdt/gen/render.hpp"
#include "gdt/metrics/params.hpp"
#include "gdt/metrics/structural.hpp"
#include "gdt/sim/engine.hpp"
#include "oracles.hpp"

using namespace gdt;
using namespace gdt::gen;
using flexscript::Family;
namespace fs = std::filesystem;

namespace {

GenSpec fixed_spec() {
  GenSpec s;
  s.layout_type = LayoutType::workstation;
  s.automation = Automation::operator_;
  s.industry = 0;
  s.layout_category = LayoutCategory::linear;
  s.n_machines = 3;
  s.source_dist = {Family::exponential, {12.5}};
  s.machine_dists = {{Family::triangular, {4, 5, 7}},
                     {Family::weibull, {2, 6.77}},
                     {Family::uniform, {4.5, 5.5}}};
  s.travel_speed = 1.5;
  s.convey_speed = 1.0;
  s.seed = 7;
  return s;
}

Constraints all_fixed(const char* category, const char* layout, const char* automation,
                      std::size_t n = 3) {
  Constraints c;
  c.set(std::string("layout_category=") + category);
  c.set(std::string("layout_type=") + layout);
  c.set(std::string("automation=") + automation);
  c.set("industry=electronics");
  c.set("n_machines=" + std::to_string(n));
  return c;
}

std::size_t count_type(const flexscript::Script& s, flexscript::ObjectType t) {
  return std::count_if(s.decls.begin(), s.decls.end(), [&](const auto& d) { return d.type == t; });
}

std::multiset<oracle::Mention> as_set(std::vector<oracle::Mention> v) {
  return {v.begin(), v.end()};
}

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("gdt_gen_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Combinations, Counts) {
  EXPECT_EQ(enumerate_combinations(3), 3645u);
  EXPECT_EQ(enumerate_combinations(1), 45u);
  EXPECT_EQ(enumerate_combinations(0), 5u);
  EXPECT_EQ(enumerate_combinations(6), 5u * 531441u);
}

TEST(Constraints, ParseAndReject) {
  Constraints c;
  c.set("layout_category=u_shaped");
  c.set("automation=agv");
  c.set("industry=photomask");
  c.set("n_machines=5");
  EXPECT_EQ(c.layout_category, LayoutCategory::u_shaped);
  EXPECT_EQ(c.automation, Automation::agv);
  EXPECT_EQ(c.industry, 2u);
  EXPECT_EQ(c.n_machines, 5u);
  EXPECT_FALSE(c.all_layers_fixed());
  for (const char* bad : {"layout_category=circle", "colour=red", "n_machines=0", "n_machines=7",
                          "industry", "automation=", "n_machines=two"}) {
    try {
      c.set(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConstraint) << bad;
    }
  }
}

TEST(SampleSpec, DeterministicAndConstrained) {
  EXPECT_EQ(sample_spec(11), sample_spec(11));
  EXPECT_NE(sample_spec(11), sample_spec(12));
  const auto c = all_fixed("parallel", "conveyor", "robot", 4);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = sample_spec(seed, c);
    EXPECT_EQ(s.layout_category, LayoutCategory::parallel);
    EXPECT_EQ(s.layout_type, LayoutType::conveyor);
    EXPECT_EQ(s.automation, Automation::robot);
    EXPECT_EQ(s.industry, 1u);
    ASSERT_EQ(s.machine_dists.size(), 4u);
    EXPECT_TRUE(flexscript::is_arrival_family(s.source_dist.family));
    for (const auto& d : s.machine_dists) EXPECT_NO_THROW(flexscript::validate(d));
    EXPECT_DOUBLE_EQ(s.travel_speed, 3.0);
  }
  // Fixing one layer leaves the others' draws alone.
  Constraints one;
  one.set("automation=manual");
  const auto a = sample_spec(99), b = sample_spec(99, one);
  EXPECT_EQ(a.layout_category, b.layout_category);
  EXPECT_EQ(a.industry, b.industry);
  EXPECT_EQ(a.layout_type, b.layout_type);
}

TEST(SampleSpec, StableArrivalMean) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto s = sample_spec(seed);
    const double arrival = dist::analytic_mean(s.source_dist);
    for (const auto& d : s.machine_dists) {
      EXPECT_GE(arrival, 1.05 * dist::analytic_mean(d) - 1e-9) << seed;
    }
  }
}

// Multinomial 3-sigma check of each layer marginal against the configured
// (uniform) weights.
TEST(SampleSpec, MarginalsWithinThreeSigma) {
  constexpr int kDraws = 10000;
  std::array<int, kLayoutCategoryCount> cat{};
  std::array<int, kAutomationCount> aut{};
  std::array<int, kIndustryCount> ind{};
  std::array<int, kLayoutTypeCount> lay{};
  for (int i = 0; i < kDraws; ++i) {
    const auto s = sample_spec(dist::derive_seed(1234, i));
    ++cat[static_cast<int>(s.layout_category)];
    ++aut[static_cast<int>(s.automation)];
    ++ind[s.industry];
    ++lay[static_cast<int>(s.layout_type)];
  }
  auto check = [&](const auto& counts) {
    const double p = 1.0 / static_cast<double>(counts.size());
    const double sigma = std::sqrt(kDraws * p * (1 - p));
    for (int c : counts) EXPECT_LE(std::abs(c - kDraws * p), 3 * sigma) << c;
  };
  check(cat);
  check(aut);
  check(ind);
  check(lay);
}

TEST(SampleSpec, WeightedMarginal) {
  auto cfg = GenConfig::defaults();
  cfg.layout_category_weights = {3, 1, 0, 0};
  int linear = 0;
  for (int i = 0; i < 4000; ++i) {
    const auto s = sample_spec(static_cast<std::uint64_t>(i), {}, cfg);
    ASSERT_TRUE(s.layout_category == LayoutCategory::linear ||
                s.layout_category == LayoutCategory::u_shaped);
    linear += s.layout_category == LayoutCategory::linear;
  }
  const double sigma = std::sqrt(4000 * 0.75 * 0.25);
  EXPECT_LE(std::abs(linear - 3000), 3 * sigma);
}

TEST(DistributionForMean, MeansAndRounding) {
  using dist::analytic_mean;
  const double mu = 10.0;
  EXPECT_EQ(distribution_for_mean(Family::constant, mu, 0.2, 0), (DistributionExpr{Family::constant, {10}}));
  EXPECT_EQ(distribution_for_mean(Family::triangular, mu, 0.2, 0),
            (DistributionExpr{Family::triangular, {8, 9, 13}}));
  EXPECT_EQ(distribution_for_mean(Family::uniform, mu, 0.2, 0), (DistributionExpr{Family::uniform, {8, 12}}));
  EXPECT_EQ(distribution_for_mean(Family::normal, mu, 0.2, 0), (DistributionExpr{Family::normal, {10, 2}}));
  EXPECT_EQ(distribution_for_mean(Family::gamma, mu, 0.2, 4), (DistributionExpr{Family::gamma, {4, 2.5}}));
  EXPECT_EQ(distribution_for_mean(Family::poisson, mu, 0.2, 0), (DistributionExpr{Family::poisson, {10}}));
  // lognormal(ln 10 - 0.25^2/2, 0.25) and weibull(2, 10/Gamma(1.5)), to two decimals.
  EXPECT_EQ(distribution_for_mean(Family::lognormal, mu, 0.2, 0.25),
            (DistributionExpr{Family::lognormal, {2.27, 0.25}}));
  EXPECT_EQ(distribution_for_mean(Family::weibull, mu, 0.2, 2), (DistributionExpr{Family::weibull, {2, 11.28}}));
  for (Family f : flexscript::kServiceFamilies) {
    EXPECT_NEAR(analytic_mean(distribution_for_mean(f, 7.3, 0.15, 3)), 7.3, 0.05)
        << flexscript::family_name(f);
  }
}

TEST(EmitCode, CountOracleLinearManual) {
  auto s = fixed_spec();
  s.automation = Automation::manual;
  s.travel_speed = 0;
  const auto script = flexscript::parse(emit_code(s));
  EXPECT_EQ(script.decls.size(), 8u);
  EXPECT_EQ(script.connections.size(), 7u);
  EXPECT_EQ(count_type(script, flexscript::ObjectType::queue), 3u);
  EXPECT_EQ(count_type(script, flexscript::ObjectType::processor), 3u);
}

TEST(EmitCode, ParallelHasOneCombiner) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_spec(seed, all_fixed("parallel", "workstation", "manual", 2));
    const auto script = flexscript::parse(emit_code(s));
    EXPECT_EQ(count_type(script, flexscript::ObjectType::combiner), 1u);
  }
}

// Every combination of layers and machine counts against the count oracle,
// with a clean parse, a successful run and a stable round trip.
TEST(EmitCode, AllLayerCombinationsMatchCountOracle) {
  for (const char* cat : {"linear", "u_shaped", "parallel", "conveyor_form"}) {
    for (const char* lay : {"workstation", "conveyor"}) {
      for (const char* aut : {"manual", "operator", "robot", "agv", "task_executor"}) {
        for (std::size_t n = 1; n <= 6; ++n) {
          const auto s = sample_spec(n * 31 + 7, all_fixed(cat, lay, aut, n));
          const auto code = emit_code(s);
          const auto script = flexscript::parse(code);
          ASSERT_TRUE(script.parse_errors.empty()) << code;
          ASSERT_TRUE(script.diagnostics.empty()) << code;
          const auto want = oracle::expected_counts(cat, lay, std::string(aut) != "manual", n);
          std::size_t flows = 0, bindings = 0;
          for (const auto& c : script.connections) {
            (c.port == flexscript::PortKind::flow ? flows : bindings) += 1;
          }
          const std::string where = std::string(cat) + "/" + lay + "/" + aut + "/" + std::to_string(n);
          EXPECT_EQ(script.decls.size(), want.decls) << where;
          EXPECT_EQ(flows, want.flows) << where;
          EXPECT_EQ(bindings, want.bindings) << where;
          EXPECT_EQ(count_type(script, flexscript::ObjectType::combiner), want.combiners) << where;
          EXPECT_EQ(flexscript::emit_canonical(script), code) << where;
          const auto outcome = sim::exec_outcome(code, 5000, 1);
          EXPECT_TRUE(outcome.success) << where << " " << outcome.label() << " " << outcome.detail;
        }
      }
    }
  }
}

TEST(EmitCode, ParametersFollowSpec) {
  const auto s = fixed_spec();
  const auto e = oracle::extract(emit_code(s));
  const auto iat = e.params.at({"Source1", "InterArrivalTime"});
  EXPECT_EQ(iat.family, "exponential");
  EXPECT_EQ(iat.args, std::vector<double>{12.5});
  EXPECT_EQ(e.params.at({"Processor2", "ProcessTime"}).family, "weibull");
  EXPECT_EQ(e.params.at({"Operator1", "TravelSpeed"}).args, std::vector<double>{1.5});
  EXPECT_EQ(e.edges.count({"Processor3", "Operator1", "S"}), 1u);
}

TEST(Sketch, CountsAndAlignment) {
  auto s = fixed_spec();
  s.automation = Automation::manual;
  s.travel_speed = 0;
  const auto g = oracle::sketch_graph(render_sketch(s));
  EXPECT_EQ(g.rects.size(), 8u);
  EXPECT_EQ(g.flows.size(), 7u);

  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto rec = make_record(i, 8, {}, GenConfig::defaults());
    const auto sk = oracle::sketch_graph(rec.sketch);
    const auto code = oracle::extract(rec.code);
    EXPECT_EQ(sk.rects, code.decls) << rec.id;
    std::set<oracle::Edge> flows, binds;
    for (const auto& e : code.edges) (std::get<2>(e) == "A" ? flows : binds).insert(e);
    EXPECT_EQ(sk.flows, flows) << rec.id;
    EXPECT_EQ(sk.bindings, binds) << rec.id;
  }
}

TEST(Sketch, DeterministicAndTitled) {
  const auto s = fixed_spec();
  EXPECT_EQ(render_sketch(s), render_sketch(s));
  const auto svg = render_sketch(s);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("semiconductor"), std::string::npos);
  EXPECT_NE(svg.find("operator"), std::string::npos);
}

TEST(Sketch, UShapedFolds) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto s = sample_spec(n, all_fixed("u_shaped", "workstation", "manual", n));
    const auto script = build_script(s);
    const auto& d = script.decls;
    std::set<double> first_half, second_half;
    for (std::size_t i = 0; i < d.size(); ++i) {
      (i < (d.size() + 1) / 2 ? first_half : second_half).insert(d[i].position.y);
    }
    EXPECT_EQ(first_half, std::set<double>{0.0});
    EXPECT_EQ(second_half.count(0.0), 0u) << n;
    // The return leg runs right to left.
    EXPECT_LT(d.back().position.x, d[(d.size() + 1) / 2].position.x);
    // Sketch draws the same coordinates.
    const auto svg = render_sketch(s);
    EXPECT_EQ(oracle::sketch_graph(svg).rects.size(), d.size());
  }
}

TEST(Prompt, GoldenSeed7) {
  const auto golden = oracle::read_file(std::string(GDT_SOURCE_DIR) + "/tests/golden/prompt_seed7.txt");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(render_prompt(fixed_spec()) + "\n", golden);
}

TEST(Prompt, ContainsArrivalVerbatim) {
  const auto p = render_prompt(fixed_spec());
  EXPECT_NE(p.find("exponential(12.5)"), std::string::npos) << p;
  EXPECT_NE(p.find("semiconductor"), std::string::npos) << p;
}

TEST(Prompt, SeedsChangeTextNotParameters) {
  auto a = fixed_spec(), b = fixed_spec();
  b.seed = 8;
  std::size_t differing = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    b.seed = seed;
    const auto pa = render_prompt(a), pb = render_prompt(b);
    differing += pa != pb;
    EXPECT_EQ(as_set(oracle::prompt_mentions(pa)), as_set(oracle::prompt_mentions(pb)));
  }
  EXPECT_GT(differing, 30u);
}

// Every parameter in the code is mentioned exactly once, value verbatim.
TEST(Prompt, MentionsMatchCode) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto rec = make_record(i, 77, {}, GenConfig::defaults());
    const auto from_prompt = as_set(oracle::prompt_mentions(rec.prompt));
    const auto from_code = as_set(oracle::code_mentions(rec.code));
    EXPECT_EQ(from_prompt, from_code) << rec.id << "\n" << rec.prompt << "\n" << rec.code;
    for (const auto& m : from_code) {
      std::size_t hits = 0;
      for (auto at = rec.prompt.find(m.value); at != std::string::npos;
           at = rec.prompt.find(m.value, at + 1)) {
        const bool word_start = at == 0 || !std::isalnum(static_cast<unsigned char>(rec.prompt[at - 1]));
        const auto end = at + m.value.size();
        const bool word_end = end >= rec.prompt.size() ||
                              !(std::isalnum(static_cast<unsigned char>(rec.prompt[end])) ||
                                rec.prompt[end] == '(' ||
                                (rec.prompt[end] == '.' && end + 1 < rec.prompt.size() &&
                                 std::isdigit(static_cast<unsigned char>(rec.prompt[end + 1]))));
        hits += word_start && word_end;
      }
      if (m.value.find('(') != std::string::npos) {
        EXPECT_EQ(hits, 1u) << m.value << " in " << rec.prompt;
      }
    }
  }
}

TEST(Enumerate, DistinctSignatures) {
  const auto c = all_fixed("linear", "workstation", "manual");
  std::set<std::string> sigs;
  for (std::uint64_t i = 0; i < enumerate_combinations(3); ++i) {
    const auto s = enumerate_spec(i, 1, c);
    std::string sig = flexscript::to_string(s.source_dist);
    for (const auto& d : s.machine_dists) sig += "|" + flexscript::to_string(d);
    sigs.insert(sig);
  }
  EXPECT_EQ(sigs.size(), 3645u);
  EXPECT_THROW(enumerate_spec(3645, 1, c), Error);
  Constraints partial;
  partial.set("automation=manual");
  try {
    enumerate_spec(0, 1, partial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConstraint);
  }
}

TEST(Config, DefaultsValidateAndRoundTrip) {
  const auto d = GenConfig::defaults();
  EXPECT_NO_THROW(d.validate());
  const auto dir = temp_dir("config");
  fs::create_directories(dir);
  auto cfg = d;
  cfg.machines_min = 2;
  cfg.machines_max = 5;
  cfg.layout_category_weights = {1, 2, 3, 4};
  cfg.industries[4].service_mean = {3, 9};
  cfg.travel_speed[2] = 4.25;
  {
    std::ofstream out(dir / "c.ini");
    out << to_ini(cfg);
  }
  const auto back = load_config(dir / "c.ini");
  EXPECT_EQ(to_ini(back), to_ini(cfg));
  EXPECT_EQ(back.machines_max, 5u);
  EXPECT_DOUBLE_EQ(back.travel_speed[2], 4.25);
  fs::remove_all(dir);
}

TEST(Config, ShippedFileIsTheDefaults) {
  const std::string shipped = std::string(GDT_SOURCE_DIR) + "/config/default.ini";
  EXPECT_EQ(oracle::read_file(shipped), to_ini(GenConfig::defaults()));
  EXPECT_EQ(to_ini(load_config(shipped)), to_ini(GenConfig::defaults()));
}

TEST(Config, RejectsMalformed) {
  const auto dir = temp_dir("badconfig");
  fs::create_directories(dir);
  auto code_for = [&](const std::string& text) {
    std::ofstream(dir / "c.ini") << text;
    try {
      load_config(dir / "c.ini");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_for("[meta]\nschema = gdt.gen-config/1\n[nonsense]\nx = 1\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_for("[machines]\nmin = 4\nmax = 2\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_for("[industry_textile]\nvariability = 0.9\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_for("[layout_category]\nlinear = abc\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_for("[meta]\nschema = other/2\n"), ErrorCode::InvalidConfig);
  try {
    load_config(dir / "missing.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  fs::remove_all(dir);
}

TEST(Config, MachineRangeIsHonoured) {
  auto cfg = GenConfig::defaults();
  cfg.machines_min = 1;
  cfg.machines_max = 6;
  std::set<std::size_t> seen;
  for (std::uint64_t i = 0; i < 600; ++i) seen.insert(sample_spec(i, {}, cfg).n_machines);
  EXPECT_EQ(seen, (std::set<std::size_t>{1, 2, 3, 4, 5, 6}));
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(sample_spec(i).n_machines, 3u);
}

TEST(Corpus, ManifestShape) {
  const auto rec = make_record(5, 42, {}, GenConfig::defaults());
  EXPECT_EQ(rec.id, "gdt-000005");
  EXPECT_EQ(rec.seed, dist::derive_seed(42, 5));
  const auto j = nlohmann::ordered_json::parse(manifest_line(rec));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "prompt", "sketch_path", "code", "metadata", "seed"}));
  EXPECT_EQ(j["sketch_path"], "sketches/gdt-000005.svg");
  EXPECT_EQ(j["metadata"]["n_machines"], 3);
  EXPECT_EQ(j["metadata"]["machine_dists"].size(), 3u);
}

TEST(Corpus, SameOutputForAnyJobCount) {
  const auto a = temp_dir("jobs1"), b = temp_dir("jobs4");
  CorpusOptions o;
  o.count = 300;
  o.seed = 42;
  o.out = a;
  o.jobs = 1;
  const auto sa = generate_corpus(o);
  o.out = b;
  o.jobs = 4;
  generate_corpus(o);
  EXPECT_EQ(sa.records, 300u);
  EXPECT_EQ(oracle::read_file((a / "manifest.jsonl").string()),
            oracle::read_file((b / "manifest.jsonl").string()));
  for (const auto& entry : fs::directory_iterator(a / "sketches")) {
    EXPECT_EQ(oracle::read_file(entry.path().string()),
              oracle::read_file((b / "sketches" / entry.path().filename()).string()));
  }
  std::size_t lines = 0;
  std::ifstream in(a / "manifest.jsonl");
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 300u);
  std::size_t total = 0;
  for (const auto& [k, v] : sa.layout_category) total += v;
  EXPECT_EQ(total, 300u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Corpus, VerifiedRecordsSelfScore) {
  const auto dir = temp_dir("verify");
  CorpusOptions o;
  o.count = 200;
  o.seed = 3;
  o.out = dir;
  o.verify = true;
  o.jobs = 2;
  EXPECT_NO_THROW(generate_corpus(o));
  std::ifstream in(dir / "manifest.jsonl");
  for (std::string l; std::getline(in, l);) {
    const auto code = nlohmann::json::parse(l)["code"].get<std::string>();
    const auto s = flexscript::parse(code);
    EXPECT_DOUBLE_EQ(metrics::structural_score(s, s).svr, 1.0);
    EXPECT_DOUBLE_EQ(metrics::pmr(s, s).pmr, 1.0);
  }
  fs::remove_all(dir);
}

TEST(Corpus, ExhaustiveNeedsFixedLayers) {
  CorpusOptions o;
  o.count = 10;
  o.out = temp_dir("exhaustive");
  o.exhaustive = true;
  try {
    generate_corpus(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConstraint);
  }
  fs::remove_all(o.out);
}

TEST(Corpus, UnwritableOutputIsIoError) {
  CorpusOptions o;
  o.count = 1;
  o.out = "/proc/gdt-cannot-write-here";
  try {
    generate_corpus(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}
