#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "onan/cli.hpp"

using namespace onan;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "onan");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string l;
  while (std::getline(is, l)) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(l);
  }
  return out;
}

}  // namespace

TEST(Cli, Dims) {
  auto r = run({"dims", "--dmax", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"D,dim", "3,26752", "4,143376"}));
}

TEST(Cli, PrincipalPartOnly) {
  auto r = run({"coeff", "--order", "1A", "--dmax", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"D,a(D)", "-4,-1", "0,2"}));
  auto g = run({"coeff", "--order", "7", "--dmax", "8", "--format", "json"});
  ASSERT_EQ(g.code, 0);
  auto first = nlohmann::json::parse(lines(g.out).front());
  EXPECT_EQ(first["D"], "-4");
  EXPECT_EQ(first.count("table"), 0u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"dims"}).code, 2);
  EXPECT_EQ(run({"dims", "--dmax", "0"}).code, 2);
  EXPECT_EQ(run({"dims", "--dmax", "4", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"coeff", "--order", "9A", "--dmax", "4"}).code, 2);
  EXPECT_EQ(run({"tables", "--which", "11"}).code, 2);
  EXPECT_EQ(run({"traces", "--level", "9", "--dmax", "8"}).code, 2);
  EXPECT_EQ(run({"rademacher", "--level", "6"}).code, 2);
  EXPECT_EQ(run({"rademacher", "--level", "4", "--mu", "-6", "--cmax", "8", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("rademacher"), std::string::npos);
}

TEST(Cli, Positivity) {
  auto r = run({"verify", "positivity", "--mmax", "36"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"m,chi,multiplicity", "7,chi7,-2", "8,chi1,-2", "12,chi1,-1"}));
}

TEST(Cli, MultMatchesReference) {
  auto r = run({"mult", "--mmax", "12"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[1], "3,0,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0");
  EXPECT_NE(r.err.find("0 mismatches"), std::string::npos);
}

TEST(Cli, CongruenceFailureExitsOne) {
  // the 7AB + 14A line fails at its principal part, so any bound reports it
  auto r = run({"verify", "congruences", "--bound", "20"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("F7AB + F14A = 0 mod 2^3,FAIL,4,4"), std::string::npos);
  EXPECT_NE(r.out.find("F1A - F31AB = 0 mod 31,PASS"), std::string::npos);
}

TEST(Cli, Tables) {
  auto r = run({"tables", "--which", "7", "--format", "markdown"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("Table 9:", 0), 0u);
  auto v = run({"verify", "tables"});
  EXPECT_EQ(v.code, 0) << v.err;
}

TEST(Cli, ClassNumbersAndTraces) {
  auto c = run({"classnum", "--level", "11", "--dmax", "8"});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(lines(c.out), (std::vector<std::string>{"D,H", "0,-1", "3,0", "4,0", "7,2", "8,2"}));
  auto t = run({"traces", "--level", "1", "--dmax", "4"});
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(lines(t.out).size(), 3u);
}

TEST(Cli, Rademacher) {
  auto r = run({"rademacher", "--level", "4", "--mu", "-4", "--n", "3", "--cmax", "4000"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("against F1A"), std::string::npos);
  EXPECT_GT(lines(r.out).size(), 10u);
}

TEST(Cli, Deterministic) {
  auto a = run({"mult", "--mmax", "24", "--format", "json"});
  auto b = run({"mult", "--mmax", "24", "--format", "json"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, 0);
}
