#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>

#include "tqf/serialize.hpp"

using namespace tqf;

namespace {

struct CliResult {
  int code;
  std::string out;
};

// Runs the CLI with the given arguments; stderr is discarded.
CliResult run(const std::string& args) {
  std::string cmd = std::string(TQF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, Enumerate) {
  CliResult r = run("enumerate --det 8");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  CliResult all = run("enumerate --det 8 --all");
  EXPECT_EQ(std::count(all.out.begin(), all.out.end(), '\n'), 5);
  json j = json::parse(run("enumerate --det 10 --json").out);
  EXPECT_EQ(j["D"], 10);
  EXPECT_EQ(j["classes"].size(), 3u);
}

TEST(Cli, Represent) {
  CliResult r = run("represent --form 1,1,5,0,0,0 --m 7");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "represented: (1,1,1)\n");
  CliResult no = run("represent --form 1,1,3,0,0,0 --m 6");
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out, "not represented\n");
  json j = json::parse(run("represent --form 1,2,5,0,0,0 --m 1 --json").out);
  EXPECT_EQ(j["represented"], true);
  EXPECT_EQ(j["vector"], json::parse("[1,0,0]"));
}

TEST(Cli, RepresentTable) {
  CliResult r = run("represent --form 1,1,2,0,0,0 --upto 16");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(membership_from_rle(r.out), represented_set(make_form(1, 1, 2), 16));
}

TEST(Cli, Excluded) {
  CliResult ex = run("excluded --entry 1b --m 6");
  EXPECT_EQ(ex.code, 1);
  EXPECT_EQ(ex.out, "excluded\n");
  CliResult ok = run("excluded --entry 1b --m 7");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "admissible\n");
}

TEST(Cli, CertifyJson) {
  CliResult r = run("certify --entry 1a --m 3 --json");
  ASSERT_EQ(r.code, 0);
  Certificate c = parse_json<Certificate>(r.out);
  EXPECT_EQ(evaluate(find_entry("1a").target, c.vector), 3);
  EXPECT_EQ(c.witness, (Witness{3, 2, 1, 0, 5, 12, 30}));
  EXPECT_TRUE(validate_certificate(c).empty());
}

TEST(Cli, CertifyText) {
  CliResult r = run("certify --entry 1b --m 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("A=2 B=0 a=73 h=90 b=111"), std::string::npos);
  CliResult ex = run("certify --entry 1b --m 6");
  EXPECT_EQ(ex.code, 1);
  EXPECT_EQ(ex.out.rfind("excluded", 0), 0u);
  EXPECT_EQ(json::parse(run("certify --entry 1b --m 6 --json").out)["excluded"], true);
}

TEST(Cli, VerifyVerdictsAgreeAcrossFormats) {
  CliResult text = run("verify --entry 2a --n 500");
  CliResult js = run("verify --entry 2a --n 500 --json");
  EXPECT_EQ(text.code, 0);
  EXPECT_EQ(js.code, 0);
  json j = json::parse(js.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2u);
  for (const auto& r : j) {
    EXPECT_EQ(r["ok"], true);
    EXPECT_NE(text.out.find(r["name"].get<std::string>() + " N=500: "), std::string::npos);
  }
  CliResult t1 = run("verify-table1 --json");
  EXPECT_EQ(t1.code, 0);
  EXPECT_EQ(json::parse(t1.out)["checked"], 72);
  EXPECT_EQ(run("verify-lemmas --n 200 --jobs 2").code, 0);
}

TEST(Cli, VerifyOnlyCharacterizesBonusEntry) {
  json j = json::parse(run("verify --entry 3sq --n 300 --json").out);
  EXPECT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["name"], "characterization 3sq");
}

TEST(Cli, InvalidInput) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("represent --form 1,1 --m 3").code, 2);
  EXPECT_EQ(run("represent --form 1,1,-1,0,0,0 --m 3").code, 2);
  EXPECT_EQ(run("represent --form 1,1,1,0,0,0").code, 2);
  EXPECT_EQ(run("certify --entry zz --m 3").code, 2);
  EXPECT_EQ(run("certify --entry 1a --m 0").code, 2);
  EXPECT_EQ(run("verify --entry 1a --n 0").code, 2);
  EXPECT_EQ(run("enumerate --det 4 --jobs 0").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
}

TEST(Cli, ConstructionFailureIsExitOne) {
  EXPECT_EQ(run("certify --entry 3sq --m 5").code, 1);
}
