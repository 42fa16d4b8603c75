#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Proc {
  int code = -1;
  std::string out;
};

// Runs the CLI with optional environment assignments; stdout only.
Proc gdt(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(GDT_CLI_PATH) + " " + args + " 2>/dev/null";
  Proc r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gdt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kScript =
    "createobject(\"/source\", \"Source1\", 0, 0, 0);\n"
    "createobject(\"/queue\", \"Queue1\", 4, 0, 0);\n"
    "createobject(\"/processor\", \"Processor1\", 8, 0, 0);\n"
    "createobject(\"/sink\", \"Sink1\", 12, 0, 0);\n"
    "setparam(Source1, \"InterArrivalTime\", constant(5));\n"
    "setparam(Processor1, \"ProcessTime\", exponential(3));\n"
    "contextdragconnection(Source1, Queue1, \"A\");\n"
    "contextdragconnection(Queue1, Processor1, \"A\");\n"
    "contextdragconnection(Processor1, Sink1, \"A\");\n";

}  // namespace

TEST_F(Cli, ParseReportsCounts) {
  const auto r = gdt("parse " + write("a.fs", kScript));
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["decls"], 4);
  EXPECT_EQ(j["params"], 2);
  EXPECT_EQ(j["connections"], 3);
}

TEST_F(Cli, ParseEmptyAndGarbage) {
  auto r = gdt("parse " + write("empty.fs", ""));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["status"], "ParseEmpty");
  const std::string garbage =
      "createobject(\"/source\", \"Source1\", 0, 0, 0);\n"
      "createobject(\"/sink\", \"Sink1\", 4, 0, 0);\n"
      "this is not a statement;\n"
      "setparam(Source1, \"InterArrivalTime\", constant(5));\n"
      "contextdragconnection(Source1, Sink1, \"A\");\n";
  r = gdt("parse " + write("g.fs", garbage));
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["unknown_statements"], 1);
  EXPECT_EQ(j["recognized_statements"], 4);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(gdt("parse " + path("missing.fs")).code, 3);
  EXPECT_EQ(gdt("frobnicate").code, 2);
  EXPECT_EQ(gdt("").code, 2);
  EXPECT_EQ(gdt("--weights 0.7,0.7 parse " + write("a.fs", kScript)).code, 2);
  EXPECT_EQ(gdt("--horizon -1 simulate " + write("b.fs", kScript)).code, 2);
  EXPECT_EQ(gdt("--format xml parse " + write("c.fs", kScript)).code, 2);
  EXPECT_EQ(gdt("--out " + path("g") + " generate --count 2 --constraint colour=red").code, 1);
  EXPECT_EQ(gdt("generate --count 2").code, 2);
  EXPECT_EQ(gdt("--help").code, 0);
}

TEST_F(Cli, SimulateDeterministic) {
  const auto file = write("a.fs", kScript);
  const auto a = gdt("--seed 5 --horizon 1000 simulate " + file);
  const auto b = gdt("--seed 5 --horizon 1000 simulate " + file);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j["outcome"], "Success");
  EXPECT_EQ(j["stats"]["source_created"], 200);

  const auto dead = gdt("simulate " + write("d.fs", "createobject(\"/source\", \"Source1\", 0, 0, 0);\n"
                                                     "setparam(Source1, \"InterArrivalTime\", constant(1));\n"));
  EXPECT_EQ(dead.code, 1);
  EXPECT_EQ(json::parse(dead.out)["outcome"], "Failure(NoPathToSink)");

  const auto traced = gdt("--horizon 20 simulate " + file + " --trace " + path("t.tsv"));
  EXPECT_EQ(traced.code, 0);
  EXPECT_EQ(oracle::read_file(path("t.tsv")).rfind("5\tSource1\tcreate\t1\n", 0), 0u);
}

TEST_F(Cli, EnvironmentMirrorsFlags) {
  const auto file = write("a.fs", kScript);
  const auto flag = gdt("--horizon 50 simulate " + file);
  EXPECT_EQ(gdt("simulate " + file, "GDT_HORIZON=50").out, flag.out);
  EXPECT_NE(gdt("simulate " + file).out, flag.out);
  EXPECT_EQ(gdt("simulate " + file, "GDT_HORIZON=0").code, 2);
}

TEST_F(Cli, ScoreIdentityAndCorruption) {
  ASSERT_EQ(gdt("--seed 4 --out " + path("corpus") + " generate --count 10").code, 0);
  std::ifstream manifest(path("corpus/manifest.jsonl"));
  int i = 0;
  for (std::string line; std::getline(manifest, line); ++i) {
    const auto rec = json::parse(line);
    const std::string id = rec["id"];
    write("refs/" + id + ".fs", rec["code"]);
    // One hypothesis of ten loses its sink.
    std::string hyp = rec["code"];
    if (i == 3) hyp.replace(hyp.find("\"/sink\""), 7, "\"/queue\"");
    write("hyps/" + id + ".fs", hyp);
  }
  ASSERT_EQ(i, 10);
  auto r = gdt("score --refs " + path("refs") + " --hyps " + path("refs"));
  ASSERT_EQ(r.code, 0);
  auto agg = json::parse(r.out)["aggregates"];
  EXPECT_EQ(agg["mean_svr"], 1.0);
  EXPECT_EQ(agg["mean_pmr"], 1.0);
  EXPECT_EQ(agg["esr"], 1.0);
  EXPECT_EQ(agg["corpus_bleu4"], 1.0);

  r = gdt("--jobs 3 score --refs " + path("refs") + " --hyps " + path("hyps"));
  ASSERT_EQ(r.code, 0);
  agg = json::parse(r.out)["aggregates"];
  EXPECT_DOUBLE_EQ(agg["esr"].get<double>(), 0.9);
  EXPECT_EQ(r.out, gdt("--jobs 1 score --refs " + path("refs") + " --hyps " + path("hyps")).out);

  const auto csv = gdt("--format csv --metrics svr,esr score --refs " + path("refs") + " --hyps " + path("hyps"));
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 11);

  fs::remove(path("hyps/gdt-000000.fs"));
  EXPECT_EQ(gdt("score --refs " + path("refs") + " --hyps " + path("hyps")).code, 1);
}

TEST_F(Cli, ScorePairsFile) {
  write("r/x.fs", kScript);
  write("h/x.fs", kScript);
  const auto pairs = write("pairs.txt", "# ref hyp\nr/x.fs h/x.fs\n");
  const auto r = gdt("--out " + path("report.json") + " score --pairs " + pairs);
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(oracle::read_file(path("report.json")));
  EXPECT_EQ(j["aggregates"]["samples"], 1);
  EXPECT_EQ(j["samples"][0]["id"], "x.fs");
  write("bad.txt", "r/x.fs\n");
  EXPECT_EQ(gdt("score --pairs " + path("bad.txt")).code, 1);
}

TEST_F(Cli, GenerateDeterministicAndConstrained) {
  ASSERT_EQ(gdt("--seed 42 --out " + path("a") + " generate --count 25").code, 0);
  ASSERT_EQ(gdt("--seed 42 --jobs 4 --out " + path("b") + " generate --count 25").code, 0);
  EXPECT_EQ(oracle::read_file(path("a/manifest.jsonl")), oracle::read_file(path("b/manifest.jsonl")));
  EXPECT_EQ(oracle::read_file(path("a/sketches/gdt-000024.svg")),
            oracle::read_file(path("b/sketches/gdt-000024.svg")));

  const auto r = gdt("--out " + path("agv") + " generate --count 10 --constraint automation=agv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("agv"), std::string::npos);
  std::ifstream in(path("agv/manifest.jsonl"));
  int n = 0;
  for (std::string line; std::getline(in, line); ++n) {
    EXPECT_NE(json::parse(line)["code"].get<std::string>().find("\"/agv\", \"AGV1\""), std::string::npos);
  }
  EXPECT_EQ(n, 10);
}

TEST_F(Cli, GenerateExhaustive) {
  const auto r = gdt("--out " + path("x") +
                     " generate --exhaustive --constraint layout_type=workstation"
                     " --constraint automation=manual --constraint industry=semiconductor"
                     " --constraint layout_category=linear");
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path("x/manifest.jsonl"));
  std::set<std::string> sigs;
  for (std::string line; std::getline(in, line);) {
    const auto md = json::parse(line)["metadata"];
    sigs.insert(md["source_dist"].dump() + md["machine_dists"].dump());
  }
  EXPECT_EQ(sigs.size(), 3645u);
}

TEST_F(Cli, GenerateWithConfig) {
  const auto cfg = write("c.ini", "[machines]\nmin = 5\nmax = 5\n");
  ASSERT_EQ(gdt("--out " + path("c") + " generate --count 5 --config " + cfg).code, 0);
  std::ifstream in(path("c/manifest.jsonl"));
  for (std::string line; std::getline(in, line);) {
    EXPECT_EQ(json::parse(line)["metadata"]["n_machines"], 5);
  }
  EXPECT_EQ(gdt("--out " + path("d") + " generate --count 5 --config " + write("bad.ini", "[oops]\n")).code, 1);
}
