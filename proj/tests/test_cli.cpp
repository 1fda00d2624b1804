#include <cstdio>
#include <regex>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ssfilter/cli.hpp"
#include "ssfilter/errors.hpp"

using namespace ssfilter;

namespace {

JobConfig config_for(const std::string& family, int n) {
  JobConfig c;
  c.family = family;
  c.n = n;
  return c;
}

struct Invocation {
  int status = -1;
  std::string out;
};

Invocation run_binary(const std::string& args) {
  const std::string cmd = std::string(SSFILTER_BIN) + " " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, got);
  const int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string strip_duration(std::string s) {
  return std::regex_replace(s, std::regex(R"("duration_ms": \d+)"), R"("duration_ms": 0)");
}

}  // namespace

TEST(Cli, ParseConfig) {
  std::istringstream in(
      "# pencils on a curve\n"
      "family = pencils-curve\n"
      "g = 1\n"
      "n = 4   \n"
      "format = json\n"
      "artifacts = e2, betti\n");
  const JobConfig c = parse_config(in);
  EXPECT_EQ(c.family, "pencils-curve");
  EXPECT_EQ(c.g, 1);
  EXPECT_EQ(c.n, 4);
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.artifacts, (std::set<std::string>{"e2", "betti"}));
  EXPECT_NO_THROW(validate(c));
}

TEST(Cli, ParseConfigBettiBlock) {
  std::istringstream in(
      "family = uconf-general\n"
      "n = 3\n"
      "convention = compact-support\n"
      "betti:\n"
      "  0 1\n"
      "  1 2\n"
      "  2 1\n");
  const JobConfig c = parse_config(in);
  EXPECT_EQ(c.betti, GradedDims({{0, 1}, {1, 2}, {2, 1}}));
  EXPECT_NO_THROW(validate(c));
}

TEST(Cli, ConfigErrors) {
  for (const char* text : {"family\n", "n = five\n", "colour = red\n", "betti:\n 1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_config(in), ConfigError) << text;
  }
  JobConfig c = config_for("uconf-plane", 3);
  c.g = 1;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(validate(config_for("tuples", 3)), ConfigError);
  EXPECT_THROW(validate(config_for("nonsense", 3)), ConfigError);
  EXPECT_THROW(validate(config_for("uconf-general", 3)), ConfigError);
}

TEST(Cli, RunExamples) {
  JobConfig c = config_for("uconf-plane", 5);
  c.artifacts = {"betti"};
  const JobReport r = run(c);
  ASSERT_FALSE(r.betti.empty());
  EXPECT_EQ(r.betti[0].role, "abutment");
  EXPECT_EQ(r.betti[0].kind, "compact-support");
  EXPECT_EQ(r.betti[0].dims, GradedDims({{10, 1}, {9, 1}}));

  JobConfig p = config_for("pencils-p1", 4);
  p.m = 1;
  p.artifacts = {"e2"};
  const JobReport rp = run(p);
  ASSERT_EQ(rp.pages.size(), 1u);
  ASSERT_EQ(rp.pages[0].cells.size(), 1u);
  EXPECT_EQ(rp.pages[0].cells[0].p, 0);
  EXPECT_EQ(rp.pages[0].cells[0].q, 12);
  EXPECT_EQ(rp.pages[0].cells[0].dim, 1u);

  JobConfig bad = config_for("pencils-curve", 5);
  bad.g = 3;
  EXPECT_THROW(run(bad), StableRangeError);
}

TEST(Cli, JsonRoundTrip) {
  std::vector<JobConfig> configs;
  JobConfig a = config_for("pencils-curve", 4);
  a.g = 1;
  a.labels = true;
  a.artifacts = {"e1", "e2", "betti", "checks"};
  configs.push_back(a);
  JobConfig b = config_for("tuples", 4);
  b.r = 2;
  configs.push_back(b);
  JobConfig c = config_for("uconf-general", 4);
  c.betti = {{0, 1}, {1, 2}, {2, 1}};
  c.convention = "compact-support";
  c.artifacts = {"e1"};
  configs.push_back(c);
  for (const auto& config : configs) {
    const JobReport r = run(config);
    const std::string text = to_json(r);
    EXPECT_EQ(report_from_json(text), r) << config.family;
    EXPECT_EQ(to_json(report_from_json(text)), text);
  }
  JobConfig chk;
  chk.families = {"uconf-plane", "tuples"};
  chk.pmax = 6;
  const JobReport cr = check(chk);
  EXPECT_EQ(report_from_json(to_json(cr)), cr);
  EXPECT_THROW(report_from_json("{}"), ConfigError);
  EXPECT_THROW(report_from_json("not json"), ConfigError);
}

TEST(Cli, DeterministicOutput) {
  JobConfig c = config_for("pencils-curve", 6);
  c.g = 2;
  c.artifacts = {"e1", "e2", "betti"};
  c.labels = true;
  EXPECT_EQ(strip_duration(to_json(run(c))), strip_duration(to_json(run(c))));
}

TEST(Cli, TextAndJsonAgree) {
  JobConfig c = config_for("pencils-curve", 5);
  c.g = 1;
  c.artifacts = {"e1", "e2", "betti"};
  const JobReport r = run(c);
  const auto j = nlohmann::json::parse(to_json(r));
  const std::string text = to_text(r);

  // Every cell, rank and Betti entry of the JSON shows up in the text.
  for (const auto& page : j.at("pages")) {
    for (const auto& cell : page.at("cells")) {
      const std::string line = "cell p=" + std::to_string(cell.at("p").get<int>()) +
                               " q=" + std::to_string(cell.at("q").get<int>()) +
                               " dim=" + std::to_string(cell.at("dim").get<std::uint64_t>());
      EXPECT_NE(text.find(line), std::string::npos) << line;
    }
    for (const auto& rk : page.at("differential_ranks")) {
      const std::string line = "rank p=" + std::to_string(rk.at("p").get<int>()) +
                               " q=" + std::to_string(rk.at("q").get<int>()) +
                               " rank=" + std::to_string(rk.at("rank").get<std::uint64_t>());
      EXPECT_NE(text.find(line), std::string::npos) << line;
    }
    EXPECT_NE(text.find("euler=" + std::to_string(page.at("euler").get<std::int64_t>())), std::string::npos);
  }
  std::size_t numbers_in_json = 0, numbers_in_text = 0;
  for (const auto& page : j.at("pages")) numbers_in_json += page.at("cells").size();
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("  cell p=", 0) == 0) ++numbers_in_text;
  EXPECT_EQ(numbers_in_json, numbers_in_text);
  for (const auto& b : r.betti)
    for (const auto& [d, v] : b.dims.entries())
      EXPECT_NE(text.find("degree=" + std::to_string(d) + " rank=" + std::to_string(v)), std::string::npos);
}

TEST(Cli, CsvHasOneRowPerCell) {
  JobConfig c = config_for("pencils-p1", 5);
  c.m = 1;
  c.artifacts = {"e1"};
  const JobReport r = run(c);
  const std::string csv = to_csv(r);
  std::size_t rows = 0;
  std::istringstream lines(csv);
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("cell,", 0) == 0) ++rows;
  EXPECT_EQ(rows, r.pages.at(0).cells.size());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_binary("compute --family uconf-plane -n 5 --artifacts betti").status, 0);
  EXPECT_EQ(run_binary("compute --family uconf-plane").status, 2);
  EXPECT_EQ(run_binary("compute --family nonsense -n 3").status, 2);
  EXPECT_EQ(run_binary("compute --bogus-flag").status, 2);
  EXPECT_EQ(run_binary("compute --family pencils-curve -g 3 -n 5").status, 3);
  EXPECT_EQ(run_binary("check --families pencils-p1 --pmax 4 --inject-fault 2").status, 4);
  const Invocation faulty = run_binary("compute --family pencils-p1 -m 1 -n 4 --artifacts checks,e2 --inject-fault 2");
  EXPECT_EQ(faulty.status, 4);
  EXPECT_NE(faulty.out.find("FAIL d d = 0"), std::string::npos);
  EXPECT_NE(faulty.out.find("(p, q) = (0, 2)"), std::string::npos);
  EXPECT_EQ(run_binary("check --families uconf-plane,tuples --pmax 6").status, 0);
  EXPECT_EQ(run_binary("explain --family pencils-curve -g 1 -n 4").status, 0);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const std::string path = testing::TempDir() + "ssfilter_override.cfg";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs("family = uconf-plane\nn = 3\nformat = json\nartifacts = betti\n", f);
    std::fclose(f);
  }
  const Invocation r = run_binary("compute --config " + path + " -n 6");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("config").at("n"), 6);
  EXPECT_EQ(j.at("schema"), kReportSchema);
}
