#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "linf/fixture_io.hpp"

using namespace linf;

namespace {

const std::string kCli = LINF_CLI_PATH;
const std::string kFixtures = FIXTURE_DIR;
const std::vector<std::string> kFixtureFiles{"f1.json", "f3.json", "f3g.json", "g4.json"};

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string fixture(const std::string& name) { return "--fixture " + kFixtures + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Fixtures, RoundTripIsIdentity) {
  for (const auto& f : kFixtureFiles) {
    auto doc = parse_document(slurp(kFixtures + "/" + f));
    json once = document_json(doc);
    auto again = parse_document(once.dump());
    EXPECT_EQ(document_json(again), once) << f;
    // the objects themselves agree, not just their serializations
    ASSERT_EQ(doc.algebras.size(), again.algebras.size());
    for (const auto& [name, a] : doc.algebras) {
      const auto& b = again.algebras.at(name);
      EXPECT_TRUE(same_space(a->space, b->space)) << name;
      EXPECT_FALSE(first_difference(a->q, b->q)) << name;
    }
    for (const auto& [name, m] : doc.morphisms)
      EXPECT_FALSE(first_difference(m.morphism.maps, again.morphisms.at(name).morphism.maps)) << name;
    for (const auto& [name, e] : doc.elements) EXPECT_EQ(e.value, again.elements.at(name).value) << name;
  }
}

TEST(Fixtures, ShippedDocumentsValidate) {
  for (const auto& f : kFixtureFiles) {
    auto doc = parse_document(slurp(kFixtures + "/" + f));
    for (const auto& [name, r] : validate_document(doc)) EXPECT_TRUE(r.ok()) << f << ": " << name;
  }
}

TEST(Fixtures, ParseErrorsCarryLineAndColumn) {
  // the stray comma is the 13th character of line 3
  try {
    parse_document("{\n  \"algebras\": {\n    \"X\": [1,,2]\n  }\n}\n");
    FAIL() << "expected a parse error";
  } catch (const FixtureError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3, column 13:", 0), 0u) << e.what();
  }
  EXPECT_THROW(parse_document(R"({"algebras": {}, "extra": 1})"), FixtureError);
  EXPECT_THROW(parse_document(R"({"algebras": {"A": {"bound": 2, "generators": [{"id": "x", "degree": 0, "weight": 1}],
                                 "differential": {"x": {"y": "1"}}, "brackets": {}}}})"),
               FixtureError);
  EXPECT_THROW(parse_document(R"({"algebras": {"A": {"bound": 2, "generators": [{"id": "x", "degree": 0, "weight": 1}],
                                 "differential": {"x": {"x": "1/0"}}, "brackets": {}}}})"),
               FixtureError);
}

TEST(Cli, DocumentedExamples) {
  auto v = run("validate " + fixture("f3.json"));
  EXPECT_EQ(v.status, 0);
  auto l = run("lift-mc " + fixture("f3.json") + " --seed e1 --json");
  ASSERT_EQ(l.status, 0);
  EXPECT_EQ(json::parse(l.out)["report"]["element"], (json{{"e", "1"}, {"u", "-1/2"}}));
  auto inl = run("lift-mc " + fixture("f3.json") + " --algebra F3 --seed e=1 --json");
  EXPECT_EQ(json::parse(inl.out)["report"]["element"], (json{{"e", "1"}, {"u", "-1/2"}}));
  auto c = run("curvature " + fixture("f3.json") + " --seed zero --json");
  ASSERT_EQ(c.status, 0);
  EXPECT_EQ(json::parse(c.out)["report"]["curvature"], json::object());
}

TEST(Cli, ExitCodes) {
  // verification failures
  EXPECT_EQ(run("is-mc " + fixture("f3.json") + " --seed e1").status, 1);
  EXPECT_EQ(run("lift-mc " + fixture("f3.json") + " --seed eobs").status, 1);
  EXPECT_EQ(run("retraction " + fixture("g4.json") + " --morphism incl").status, 1);
  EXPECT_EQ(run("verify-homotopy " + fixture("f3.json") + " --morphism const_path --pair id,twist_incl").status, 1);
  // argument and parse errors
  EXPECT_EQ(run("bogus " + fixture("f3.json")).status, 2);
  EXPECT_EQ(run("validate --fixture /nonexistent/fixture.json").status, 2);
  EXPECT_EQ(run("lift-mc " + fixture("f3.json")).status, 2);
  EXPECT_EQ(run("lift-mc " + fixture("f3.json") + " --algebra F3 --seed q=1").status, 2);
  auto bad = temp_file("broken.json", "{\n  \"algebras\": [1,,2]\n}\n");
  EXPECT_EQ(run("validate --fixture " + bad).status, 2);
  // an invalid structure is a validation failure with the witness word
  auto invalid = temp_file("invalid.json", R"({"algebras": {"A": {"bound": 3,
    "generators": [{"id": "e", "degree": 0, "weight": 1}, {"id": "u", "degree": 0, "weight": 2}, {"id": "c", "degree": 1, "weight": 2}],
    "differential": {"u": {"c": "1"}}, "brackets": {"e.e": {"u": "1"}}}}})");
  auto r = run("validate --fixture " + invalid + " --json");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("\"e.e\""), std::string::npos);
  EXPECT_EQ(run("lcs --fixture " + invalid + " --algebra A").status, 1);
}

TEST(Cli, EveryCommandRunsAndIsDeterministic) {
  const std::vector<std::string> invocations{
      "validate " + fixture("g4.json"),
      "classify " + fixture("g4.json") + " --morphism fib",
      "curvature " + fixture("f3.json") + " --seed lift2",
      "is-mc " + fixture("f3.json") + " --seed mc1",
      "twist " + fixture("f3.json") + " --seed mc1",
      "push " + fixture("f3.json") + " --morphism twist_incl --seed mc1",
      "lift-mc " + fixture("g4.json") + " --seed ef",
      "obstruction " + fixture("f3.json") + " --seed e1 --level 3",
      "torsor " + fixture("f3.json") + " --algebra F3torsor --seed e=1 --level 3",
      "strictify " + fixture("g4.json") + " --morphism fib",
      "pullback " + fixture("g4.json") + " --morphism fib --along conj",
      "decompose " + fixture("g4.json") + " --morphism fib",
      "retraction " + fixture("g4.json") + " --morphism fib",
      "factorize " + fixture("g4.json") + " --morphism incl",
      "homotopy-inverse " + fixture("g4.json") + " --morphism conj",
      "verify-homotopy " + fixture("f3.json") + " --morphism const_path --pair id,id",
      "cohomology " + fixture("g4.json") + " --algebra G4 --level 1 --degree 1",
      "lcs " + fixture("g4.json") + " --algebra G4",
      "simplex-validate " + fixture("f3g.json") + " --seed edge",
      "smc-map " + fixture("f3g.json") + " --morphism quad --seed edge",
      "mc-pullback-check " + fixture("g4.json") + " --morphism proj --along conj",
  };
  for (const auto& args : invocations) {
    auto a = run(args + " --json"), b = run(args + " --json");
    EXPECT_EQ(a.status, 0) << args << "\n" << a.out;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_TRUE(json::accept(a.out)) << args;
    EXPECT_EQ(run(args).status, 0) << args;
  }
}
