#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kwnet/cli.hpp"
#include "kwnet/utf8.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = kwnet::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kwnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const std::string kFixture = KWNET_FIXTURE_DIR "/fixture10.jsonl";

}  // namespace

TEST_F(Cli, AnalyzeHappyPath) {
  const Result r = run({"analyze", "--input", kFixture, "--period", "month", "--seed", "42", "--runs", "10",
                        "--out", path("r.json")});
  EXPECT_EQ(r.code, kwnet::kExitOk) << r.err;
  const std::string report = slurp(path("r.json"));
  EXPECT_NE(report.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_NE(report.find("\"label\": \"fixture10\""), std::string::npos);
  EXPECT_NE(report.find("\"master_seed\": 42"), std::string::npos);
}

TEST_F(Cli, MissingInputIsUsageError) {
  const Result r = run({"analyze", "--period", "month"});
  EXPECT_EQ(r.code, kwnet::kExitUsage);
  EXPECT_NE(r.err.find("--input"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, UnknownFlagAndBadValuesAreUsageErrors) {
  EXPECT_EQ(run({"analyze", "--input", kFixture, "--bogus"}).code, kwnet::kExitUsage);
  EXPECT_EQ(run({"analyze", "--input", kFixture, "--period", "week"}).code, kwnet::kExitUsage);
  EXPECT_EQ(run({"analyze", "--input", kFixture, "--top-k", "0"}).code, kwnet::kExitUsage);
  EXPECT_EQ(run({}).code, kwnet::kExitUsage);
  EXPECT_EQ(run({"synth"}).code, kwnet::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kwnet::kExitUsage);
  const Result help = run({"--help"});
  EXPECT_EQ(help.code, kwnet::kExitOk);
  EXPECT_NE(help.out.find("analyze"), std::string::npos);
}

TEST_F(Cli, FatalErrorsExitOne) {
  const Result r = run({"analyze", "--input", path("missing.jsonl")});
  EXPECT_EQ(r.code, kwnet::kExitFailure);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
  EXPECT_EQ(run({"analyze", "--input", kFixture, "--stopwords", path("nope.txt")}).code, kwnet::kExitFailure);
}

TEST_F(Cli, SynthRandomWritesSixHundredLines) {
  const Result r = run({"synth", "random", "--months", "6", "--per-month", "100", "--seed", "7", "--out", path("s.jsonl")});
  ASSERT_EQ(r.code, kwnet::kExitOk) << r.err;
  const std::string text = slurp(path("s.jsonl"));
  EXPECT_EQ(count_lines(text), 600u);
  EXPECT_EQ(run({"synth", "random", "--months", "6", "--per-month", "100", "--seed", "7"}).out, text);
}

TEST_F(Cli, SynthMarkovAndTopics) {
  const Result markov = run({"synth", "markov", "--input", kFixture, "--order", "1", "--months", "2", "--per-month", "5",
                             "--out", path("m.jsonl")});
  ASSERT_EQ(markov.code, kwnet::kExitOk) << markov.err;
  EXPECT_EQ(count_lines(slurp(path("m.jsonl"))), 10u);

  const Result topics = run({"synth", "topics", "--topics", "3", "--vocab", "5", "--months", "1", "--per-month", "20",
                             "--out", path("t.jsonl"), "--truth", path("truth.csv")});
  ASSERT_EQ(topics.code, kwnet::kExitOk) << topics.err;
  EXPECT_EQ(count_lines(slurp(path("t.jsonl"))), 20u);
  const std::string truth = slurp(path("truth.csv"));
  EXPECT_EQ(truth.rfind("keyword,topic\n", 0), 0u);
  EXPECT_EQ(count_lines(truth), 16u);
}

TEST_F(Cli, ExportsAndModularity) {
  const Result r = run({"analyze", "--input", kFixture, "--runs", "10", "--label", "Fixture Ten", "--out", path("r.json"),
                        "--export-gexf", path("gexf"), "--export-edges", path("edges"), "--export-partitions",
                        path("parts"), "--heatmap", path("one.csv")});
  ASSERT_EQ(r.code, kwnet::kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(path("gexf/fixture_ten_2020-03.gexf")));
  EXPECT_TRUE(fs::exists(path("edges/fixture_ten_2020-03_edges.csv")));
  EXPECT_TRUE(fs::exists(path("edges/fixture_ten_2020-03_vertices.csv")));
  EXPECT_TRUE(fs::exists(path("parts/fixture_ten_2020-03_partition.csv")));
  EXPECT_EQ(slurp(path("one.csv")).substr(0, 20), "account,2020-03,mean");

  const Result from_csv = run({"modularity", "--edges", path("edges/fixture_ten_2020-03_edges.csv"), "--vertices",
                               path("edges/fixture_ten_2020-03_vertices.csv"), "--partition",
                               path("parts/fixture_ten_2020-03_partition.csv")});
  ASSERT_EQ(from_csv.code, kwnet::kExitOk) << from_csv.err;
  const Result from_gexf = run({"modularity", "--gexf", path("gexf/fixture_ten_2020-03.gexf")});
  ASSERT_EQ(from_gexf.code, kwnet::kExitOk) << from_gexf.err;
  EXPECT_EQ(from_csv.out, from_gexf.out);
  // Six decimals, matching the report's representative modularity.
  ASSERT_EQ(from_csv.out.size(), std::string("0.000000\n").size());
  const std::string report = slurp(path("r.json"));
  EXPECT_NE(report.find("\"modularity\": " + from_csv.out.substr(0, 7)), std::string::npos);

  EXPECT_EQ(run({"modularity"}).code, kwnet::kExitUsage);
  EXPECT_EQ(run({"modularity", "--edges", "x.csv"}).code, kwnet::kExitUsage);
}

TEST_F(Cli, ExportHeatmapFromReports) {
  ASSERT_EQ(run({"analyze", "--input", kFixture, "--runs", "5", "--label", "a", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"analyze", "--input", kFixture, "--runs", "5", "--label", "b", "--out", path("b.json")}).code, 0);
  const Result r = run({"export", "--reports", path("a.json"), path("b.json"), "--heatmap", path("h.csv")});
  ASSERT_EQ(r.code, kwnet::kExitOk) << r.err;
  const std::string heatmap = slurp(path("h.csv"));
  EXPECT_EQ(count_lines(heatmap), 3u);
  EXPECT_EQ(heatmap.rfind("account,2020-03,mean\na,", 0), 0u);

  ASSERT_EQ(run({"analyze", "--input", kFixture, "--runs", "5", "--period", "quarter", "--out", path("q.json")}).code, 0);
  EXPECT_EQ(run({"export", "--reports", path("a.json"), path("q.json"), "--heatmap", path("h2.csv")}).code,
            kwnet::kExitFailure);
  EXPECT_EQ(run({"export", "--heatmap", path("h3.csv")}).code, kwnet::kExitUsage);
}

TEST_F(Cli, CsvInputWithColumnMap) {
  {
    std::ofstream csv(path("tta.csv"));
    csv << "tweet_id,body,created,rt\n"
           "1,\"The economy is strong, jobs are back\",03-02-2020 10:00:00,f\n"
           "2,RT the economy,03-03-2020 10:00:00,t\n"
           "3,Jobs and the economy,03-04-2020 10:00:00,false\n";
  }
  const Result r = run({"analyze", "--input", path("tta.csv"), "--column-map",
                        "id=tweet_id,text=body,created_at=created,is_retweet=rt", "--runs", "3"});
  ASSERT_EQ(r.code, kwnet::kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"kept\": 2"), std::string::npos);
  EXPECT_EQ(run({"analyze", "--input", path("tta.csv")}).code, kwnet::kExitFailure);
}

TEST(Utf8, DecodeLengthSanitize) {
  using namespace kwnet::utf8;
  EXPECT_EQ(length("caf\xC3\xA9"), 4u);
  EXPECT_EQ(length("\xF0\x9F\x98\x80"), 1u);
  EXPECT_TRUE(is_valid("caf\xC3\xA9"));
  EXPECT_FALSE(is_valid("\xC3"));
  EXPECT_FALSE(is_valid("\xED\xA0\x80"));  // surrogate
  EXPECT_FALSE(is_valid("\xC0\xAF"));      // overlong
  EXPECT_EQ(sanitize("a\xFF" "b"), "a\xEF\xBF\xBD" "b");
  std::size_t pos = 0;
  EXPECT_EQ(decode("\xE2\x80\x99x", pos), U'’');
  EXPECT_EQ(pos, 3u);
  std::string out;
  append(out, U'\U0001F600');
  EXPECT_EQ(out, "\xF0\x9F\x98\x80");
}
