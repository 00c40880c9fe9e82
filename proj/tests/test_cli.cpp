#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cyclerank/cli.hpp"

using namespace cyclerank;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "cyclerank");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(CYCLERANK_DATA_DIR) + "/" + name; }

class TempFile {
public:
  explicit TempFile(const std::string& contents, const std::string& ext = ".txt") {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("cyclerank-cli-" + std::to_string(rd()) + ext);
    std::ofstream(path_) << contents;
  }
  ~TempFile() { fs::remove(path_); }
  std::string str() const { return path_.string(); }

private:
  fs::path path_;
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, CycleRankOnTriangle) {
  auto r = run({"run", "--input", data("triangle.csv"), "--algorithm", "cyclerank", "--source",
                "a", "--k", "3", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["entries"].size(), 3u);
  for (const auto& e : j["entries"]) EXPECT_NEAR(e["score"].get<double>(), 0.049787, 1e-6);
  EXPECT_EQ(j["query"]["parameters"]["sigma"], "exponential");
}

TEST(Cli, CsvOutput) {
  auto r = run({"run", "-i", data("triangle.csv"), "-a", "pagerank", "-o", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "rank,label,score");
  EXPECT_EQ(rows[1], "1,a,0.333333");
  EXPECT_EQ(rows[3], "3,c,0.333333");
}

TEST(Cli, TableOutputAndTopK) {
  auto r = run({"run", "-i", data("toy_wiki.csv"), "-a", "cyclerank", "-s", "Fake news", "-n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].rfind("rank", 0), 0u);
  EXPECT_NE(rows[1].find("Fake news"), std::string::npos);
}

TEST(Cli, TwoDRankHasNoScores) {
  auto r = run({"run", "-i", data("triangle.csv"), "-a", "2drank", "-o", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[1], "1,a,");
}

TEST(Cli, ExplicitFormats) {
  auto r = run({"run", "-i", data("asd_sample.asd"), "-a", "pagerank", "-o", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto forced = run({"run", "-i", data("asd_sample.asd"), "-f", "asd", "-a", "pagerank", "-o", "json"});
  EXPECT_EQ(forced.out, r.out);
  EXPECT_NE(run({"run", "-i", data("asd_sample.asd"), "-f", "pajek", "-a", "pagerank"}).code, 0);
}

TEST(Cli, UsageErrorsExitNonzero) {
  auto missing_source = run({"run", "-i", data("triangle.csv"), "-a", "cyclerank"});
  EXPECT_NE(missing_source.code, 0);
  EXPECT_NE(missing_source.err.find("source"), std::string::npos);

  EXPECT_NE(run({"run", "-i", data("triangle.csv"), "-a", "pagerank", "--alpha", "1.5"}).code, 0);
  EXPECT_NE(run({"run", "-i", data("triangle.csv"), "-a", "pagerank", "--k", "3"}).code, 0);
  EXPECT_NE(run({"run", "-i", data("triangle.csv"), "-a", "hits"}).code, 0);
  EXPECT_NE(run({"run", "-i", "/no/such/file.csv", "-a", "pagerank"}).code, 0);
  EXPECT_NE(run({"run", "-i", data("triangle.csv"), "-a", "cyclerank", "-s", "zz"}).code, 0);
  EXPECT_NE(run({"run", "-a", "pagerank"}).code, 0);
  EXPECT_NE(run({}).code, 0);
}

TEST(Cli, ParseErrorReportsLine) {
  TempFile bad("a,b\nb\n", ".csv");
  auto r = run({"run", "-i", bad.str(), "-a", "pagerank"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, CompareColumnsSideBySide) {
  TempFile spec(
      "# comparison\n"
      "--algorithm cyclerank --source \"Fake news\" --k 3\n"
      "\n"
      "--algorithm pagerank --alpha 0.3\n"
      "--algorithm personalized_pagerank --source \"Fake news\" --alpha 0.3\n");
  auto r = run({"compare", "-i", data("toy_wiki.csv"), "--spec", spec.str(), "-o", "csv", });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 12u);  // header + 11 nodes
  EXPECT_NE(rows[0].find("cyclerank(source=Fake news, K=3, sigma=exponential) label"),
            std::string::npos);
  EXPECT_NE(rows[0].find("pagerank(alpha=0.3) label"), std::string::npos);
  EXPECT_EQ(rows[1].rfind("1,Fake news,", 0), 0u);

  auto again = run({"compare", "-i", data("toy_wiki.csv"), "--spec", spec.str(), "-o", "csv"});
  EXPECT_EQ(again.out, r.out);

  auto table = run({"compare", "-i", data("toy_wiki.csv"), "--spec", spec.str()});
  ASSERT_EQ(table.code, 0);
  EXPECT_EQ(lines(table.out).size(), 12u);
}

TEST(Cli, CompareKeepsFailingColumn) {
  TempFile spec(
      "--algorithm pagerank -n 2\n"
      "--algorithm cyclerank --source Nowhere\n");
  auto r = run({"compare", "-i", data("triangle.csv"), "--spec", spec.str(), "-o", "json"});
  EXPECT_EQ(r.code, 1);
  const auto cols = json::parse(r.out)["columns"];
  ASSERT_EQ(cols.size(), 2u);
  EXPECT_EQ(cols[0]["entries"].size(), 2u);
  EXPECT_TRUE(cols[1]["entries"].is_null());
  EXPECT_NE(cols[1]["error"].get<std::string>().find("Nowhere"), std::string::npos);
  EXPECT_NE(r.err.find("Nowhere"), std::string::npos);

  auto csv = run({"compare", "-i", data("triangle.csv"), "--spec", spec.str(), "-o", "csv"});
  EXPECT_NE(csv.out.find("ERROR: "), std::string::npos);
}

TEST(Cli, CompareSpecErrors) {
  TempFile one("--algorithm pagerank\n");
  EXPECT_NE(run({"compare", "-i", data("triangle.csv"), "--spec", one.str()}).code, 0);
  TempFile bad("--algorithm pagerank\n--bogus 3\n");
  auto r = run({"compare", "-i", data("triangle.csv"), "--spec", bad.str()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}
