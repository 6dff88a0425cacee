#include <gtest/gtest.h>

#include <json.hpp>
#include <filesystem>
#include <random>
#include <sstream>

#include "codestab/cli.hpp"
#include "codestab/dataset_io.hpp"
#include "codestab/report_io.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

namespace codestab {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "codestab");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("codestab_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string golden(const std::string& name) {
  return testing::slurp(fs::path(CODESTAB_GOLDEN_DIR) / name);
}

TEST_F(CliTest, Languages) {
  const auto r = run({"languages"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "python\ttree-sitter-python 0.25.0\nsql\ttree-sitter-sql 0.3.11\n");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(run({"parse"}).code, cli::kUsageError);
  const auto f = file("a.py", "x = 1\n");
  EXPECT_EQ(run({"parse", f, "-l", "cobol"}).code, cli::kUsageError);
  EXPECT_EQ(run({"compare", f, f, "-l", "python", "--depth", "0"}).code,
            cli::kUsageError);
  EXPECT_EQ(run({"compare", f, f, "-l", "python", "--epsilon", "-1"}).code,
            cli::kUsageError);
  EXPECT_EQ(run({"compare", f, f, "-l", "python", "--encoding", "tokens"}).code,
            cli::kUsageError);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, ParsePrintsTree) {
  const auto r = run({"parse", file("a.py", "x = 1\n"), "-l", "python"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("module [0, 6)"), std::string::npos);
  EXPECT_NE(r.out.find("identifier [0, 1) \"x\""), std::string::npos);
  EXPECT_NE(r.out.find("# nodes: 6, errors: no"), std::string::npos);
}

TEST_F(CliTest, DumpSymbolsGolden) {
  const std::string src = fs::path(CODESTAB_GOLDEN_DIR) / "assign.py";
  const auto v = run({"dump-symbols", src, "-l", "python", "--encoding", "value"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, golden("assign.value.d1.txt"));
  const auto s = run({"dump-symbols", src, "-l", "python"});
  EXPECT_EQ(s.out, golden("assign.structural.d1.txt"));
}

TEST_F(CliTest, DumpSymbolsSingleToken) {
  const auto r = run({"dump-symbols", file("t.py", "pass"), "-l", "python",
                      "--depth", "1"});
  EXPECT_EQ(r.code, 0);
  // module -> pass_statement -> "pass": one line per distinct subtree.
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 3u);
}

TEST_F(CliTest, ParseFailureExitCodes) {
  const auto garbage = file("g.py", "@@@ ))");
  const auto r = run({"dump-symbols", garbage, "-l", "python", "--strict"});
  EXPECT_EQ(r.code, cli::kParseFailure);
  EXPECT_NE(r.err.find("python"), std::string::npos);
  const auto recovered = file("r.py", "x = (1\ny = 2\n");
  EXPECT_EQ(run({"dump-symbols", recovered, "-l", "python"}).code, 0);
  EXPECT_EQ(run({"dump-symbols", recovered, "-l", "python", "--strict"}).code,
            cli::kParseFailure);
  EXPECT_EQ(run({"parse", file("e.sql", ""), "-l", "sql"}).code,
            cli::kParseFailure);
  EXPECT_EQ(run({"parse", path("missing.py"), "-l", "python"}).code,
            cli::kIoError);
}

nlohmann::json compare(const std::vector<std::string>& args) {
  const auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return nlohmann::json::parse(r.out);
}

TEST_F(CliTest, CompareSelfIsOne) {
  const auto f = (testing::fixtures_dir() / "sql" / "s04_join.sql").string();
  for (const char* d : {"1", "2", "3"}) {
    const auto j = compare({"compare", f, f, "-l", "sql", "--depth", d});
    ASSERT_EQ(j["scores"].size(), 4u);
    for (const auto& [k, v] : j["scores"].items()) EXPECT_EQ(v.get<double>(), 1.0) << k;
  }
}

TEST_F(CliTest, CompareRenamedCopies) {
  const auto a = file("a.py", "def add(a, b):\n    return a + b\n");
  const auto b = file("b.py", "def plus(x, y):\n    return x + y\n");
  const auto j = compare({"compare", a, b, "-l", "python"});
  EXPECT_EQ(j["scores"]["jsd_structural"].get<double>(), 1.0);
  EXPECT_EQ(j["scores"]["sce_structural"].get<double>(), 1.0);
  EXPECT_LT(j["scores"]["jsd"].get<double>(), 1.0);
  EXPECT_LT(j["scores"]["sce"].get<double>(), 1.0);
}

TEST_F(CliTest, CompareMatchesOracle) {
  const std::string sa = "x = 1\n", sb = "x = 2\ny = x\n";
  const auto j = compare({"compare", file("a.py", sa), file("b.py", sb), "-l",
                          "python", "--depth", "2"});
  const auto expected = oracle::pair_scores("python", sa, sb, 2, kDefaultEpsilon, true);
  for (const auto& [k, v] : expected) {
    EXPECT_NEAR(j["scores"][k].get<double>(), static_cast<double>(v), 1e-9) << k;
  }
}

TEST_F(CliTest, CompareMetricAndEncodingSelection) {
  const auto f = file("a.py", "x = 1\n");
  const auto j = compare({"compare", f, f, "-l", "python", "--metric", "jsd",
                          "--encoding", "structural"});
  EXPECT_EQ(j["scores"].size(), 1u);
  EXPECT_TRUE(j["scores"].contains("jsd_structural"));
}

TEST_F(CliTest, RunAndCorrelate) {
  std::mt19937_64 rng(5);
  auto ds = testing::synthetic_dataset(rng, 6, 5);
  ds[2].samples[1] = "def (((";
  std::string text;
  for (const auto& t : ds) text += to_jsonl_line(t) + "\n";
  const auto data = file("ds.jsonl", text);

  const auto r = run({"run", data, "--out", path("r.json"), "--csv", path("r.csv"),
                      "-j", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("tasks scored: 6, skipped: 0"), std::string::npos);
  const auto report = report_from_json(read_text_file(path("r.json")));
  EXPECT_EQ(report.per_task[2].parse_failures, 1u);
  EXPECT_EQ(report.per_task[2].samples_scored, 4u);
  EXPECT_FALSE(read_text_file(path("r.csv")).empty());

  ASSERT_EQ(run({"run", data, "--out", path("r2.json"), "--csv", path("r2.csv"), "-j", "3"}).code, 0);
  EXPECT_EQ(read_text_file(path("r.json")), read_text_file(path("r2.json")));
  EXPECT_EQ(read_text_file(path("r.csv")), read_text_file(path("r2.csv")));

  const auto c = run({"correlate", path("r.json")});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.rfind("metric,jsd,jsd_structural,sce,sce_structural,bleu,pass@1\n", 0),
            0u);
  const auto c2 = run({"correlate", path("r.json"), "--no-external", "-o", path("c.csv")});
  EXPECT_EQ(c2.code, 0);
  EXPECT_EQ(read_text_file(path("c.csv")).rfind("metric,jsd,jsd_structural,sce,sce_structural\n", 0),
            0u);
}

TEST_F(CliTest, RunErrors) {
  const auto bad = file("bad.jsonl",
                        R"({"task_id": "a", "language": "python", "samples": ["x", "y"]})"
                        "\n{oops\n");
  const auto r = run({"run", bad, "--out", path("r.json")});
  EXPECT_EQ(r.code, cli::kInvalidInput);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);

  const auto none = file("none.jsonl",
                         R"j({"task_id": "a", "language": "python", "samples": ["@@@ ))", "x = 1"]})j"
                         "\n");
  EXPECT_EQ(run({"run", none, "--out", path("r.json")}).code, cli::kInsufficientData);
  EXPECT_EQ(run({"run", path("missing.jsonl"), "--out", path("r.json")}).code,
            cli::kIoError);
}

TEST_F(CliTest, CorrelateInsufficientData) {
  const auto ds = file("one.jsonl",
                       R"({"task_id": "a", "language": "sql", "samples": ["SELECT 1;", "SELECT 2;"]})"
                       "\n");
  ASSERT_EQ(run({"run", ds, "--out", path("r.json")}).code, 0);
  EXPECT_EQ(run({"correlate", path("r.json")}).code, cli::kInsufficientData);
}

TEST_F(CliTest, EnvironmentOverrides) {
  const auto f = file("a.py", "x = 1\n");
  ::setenv("CODESTAB_METRIC", "sce", 1);
  const auto j = compare({"compare", f, f, "-l", "python"});
  ::unsetenv("CODESTAB_METRIC");
  EXPECT_EQ(j["scores"].size(), 2u);
  EXPECT_TRUE(j["scores"].contains("sce"));
}

}  // namespace
}  // namespace codestab
