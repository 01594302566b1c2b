#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "apx/errors.hpp"
#include "apx/jsonl.hpp"
#include "cli.hpp"
#include "expr.hpp"

using namespace apx;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string data(const std::string& name) { return std::string(APX_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

// "<value> ±<radius>" -> value.
Rat printed_value(const std::string& out) { return Rat::parse(out.substr(0, out.find(' '))); }

}  // namespace

TEST(CliEval, SquareOfSqrtTwo) {
  auto r = run({"eval", "sq(x)", "--input", "sqrt:2", "--n", "8", "--schedule", "dyadic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("±1/256"), std::string::npos);
  EXPECT_LT(abs(printed_value(r.out) - 2), Rat(1, 256));
}

TEST(CliEval, AddAndConst) {
  auto r = run({"eval", "add(x,y)", "--input", "rat:1/3", "--input", "rat:1/6", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1/2 ±1/32\n");
  EXPECT_EQ(run({"eval", "const:5", "--n", "0"}).out, "5 ±1\n");
}

TEST(CliEval, NestedExpressionsAndLeaves) {
  auto r = run({"eval", "add(mul(x, x), affine(-2, 1, sqrt:2))", "--input", "rat:3/2", "--n", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  // 9/4 + 1 - 2 sqrt(2): compare squares of (v - 13/4) against 8 with the radius.
  Rat v = printed_value(r.out), rad(1, 64);
  Rat lo = Rat(13, 4) - v - rad, hi = Rat(13, 4) - v + rad;  // 2 sqrt(2) ∈ (lo, hi)
  EXPECT_TRUE(lo * lo < 8 && 8 < hi * hi) << r.out;
  auto h = run({"eval", "sq(x)", "--input", "sqrt:3", "--n", "5", "--schedule", "harmonic"});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_NE(h.out.find("±1/6"), std::string::npos);
  EXPECT_LT(abs(printed_value(h.out) - 3), Rat(1, 6));
}

TEST(CliEval, Errors) {
  EXPECT_EQ(run({"eval", "add(x"}).code, 2);
  EXPECT_EQ(run({"eval", "div(x,y)", "--input", "rat:1", "--input", "rat:2"}).code, 2);
  EXPECT_EQ(run({"eval", "sq(x)"}).code, 2);  // missing input
  EXPECT_EQ(run({"eval", "sq(x)", "--input", "sqrt:-1"}).code, 2);
  EXPECT_EQ(run({"eval", "sq(x)", "--input", "rat:1", "--schedule", "cubic"}).code, 2);
  auto capped = run({"eval", "sq(x)", "--input", "sqrt:2", "--n", "30", "--step-cap", "10"});
  EXPECT_EQ(capped.code, 3);
  EXPECT_NE(capped.err.find("step cap"), std::string::npos);
}

TEST(CliExpr, Parser) {
  auto p = cli::parse_expression("mul(x, add(y, x))");
  EXPECT_EQ(p.variables, (std::vector<std::string>{"x", "y"}));
  EXPECT_THROW(cli::parse_expression("affine(a,1,x)"), ParseError);
  EXPECT_THROW(cli::parse_expression("sq(x) y"), ParseError);
  EXPECT_THROW(cli::parse_expression("const:1/0"), ParseError);
}

TEST(CliHelp, ShowsDefaults) {
  auto r = run({"eval", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("50000000"), std::string::npos);
  EXPECT_NE(r.out.find("[dyadic]"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliEnumerate, DeterministicAndEmpty) {
  auto a = run({"enumerate", "id", "--stages", "100"});
  auto b = run({"enumerate", "id", "--stages", "100"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_GT(lines(a.out), 1u);
  auto e = run({"enumerate", "empty", "--stages", "50"});
  EXPECT_EQ(lines(e.out), 1u);  // header only
  EXPECT_EQ(run({"enumerate", "nosuch"}).code, 2);
}

TEST(CliEnumerate, ExactlyTheFirstStages) {
  auto r = run({"enumerate", "sq", "--stages", "300"});
  std::istringstream in(r.out);
  System replay = read_system_jsonl(in);
  System sq = sq_system();
  for (std::uint64_t s = 0; s < 400; ++s) EXPECT_EQ(replay.stage(s), s < 300 ? sq.stage(s) : std::nullopt);
  EXPECT_EQ(replay.label(), "sq");
  EXPECT_TRUE(replay.probe());
}

TEST(CliConvert, ExampleQuadrupleIsRecorded) {
  auto r = run({"convert", "--direction", "m2t", "id", "--stages", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(R"({"k":["0"],"l":["0"],"m":1,"n":0,"s":105})"), std::string::npos);
  EXPECT_NE(r.out.find(R"("flavor":"topological")"), std::string::npos);
}

TEST(CliConvert, FromAFileAndBack) {
  auto m2t = run({"convert", "--direction", "m2t", "id", "--stages", "3000"});
  std::string path = temp_file("apx_m2t.jsonl", m2t.out);
  auto back = run({"convert", "--direction", "t2m", path, "--stages", "500"});
  ASSERT_EQ(back.code, 0) << back.err;
  EXPECT_NE(back.out.find(R"x("system":"t2m(m2t(id))")x"), std::string::npos);
  EXPECT_EQ(run({"convert", "--direction", "t2m", "id"}).code, 2);  // wrong flavor
}

TEST(CliJsonl, MalformedLineIsNamed) {
  auto good = run({"enumerate", "id", "--stages", "20"}).out;
  std::string bad = good + "{\"s\": 99, \"k\": [\"1/2\"], \"m\": 1}\n";
  std::string path = temp_file("apx_bad.jsonl", bad);
  auto r = run({"enumerate", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line " + std::to_string(lines(good) + 1)), std::string::npos) << r.err;
  std::string garbage = temp_file("apx_garbage.jsonl", good.substr(0, good.find('\n') + 1) + "not json\n");
  auto g = run({"enumerate", garbage});
  EXPECT_EQ(g.code, 2);
  EXPECT_NE(g.err.find("line 2"), std::string::npos) << g.err;
  EXPECT_EQ(run({"enumerate", "/nonexistent/x.jsonl"}).code, 2);
}

TEST(CliVerify, TwoPointFixture) {
  auto ok = run({"verify", "--instance", data("two_point.json")});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("consistent up to bounds"), std::string::npos);
  auto bad = run({"verify", "--instance", data("two_point.json"), "--pairs", data("two_point_partial.jsonl")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("j=1"), std::string::npos);
  EXPECT_EQ(run({"verify", "--instance", "/nonexistent.json"}).code, 2);
}

TEST(CliVerify, Systems) {
  auto id = run({"verify", "id"});
  EXPECT_EQ(id.code, 0) << id.out;
  auto halving = run({"verify", "halving", "--schedule", "dyadic"});
  EXPECT_EQ(halving.code, 1);
  EXPECT_NE(halving.out.find("condition (a) violated"), std::string::npos);
  auto ok = run({"verify", "halving", "--schedule", "harmonic", "--m-cap", "256"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  auto abs = run({"verify", "abs-diagonal", "--samples", "10"});
  EXPECT_EQ(abs.code, 1);
  EXPECT_NE(abs.out.find("no witness m <= 64"), std::string::npos);
  // A replayed file is checked for soundness like the builder it came from.
  auto file = temp_file("apx_halving.jsonl", run({"enumerate", "halving", "--schedule", "dyadic", "--stages", "2000"}).out);
  auto replay = run({"verify", file});
  EXPECT_EQ(replay.code, 1);
  EXPECT_NE(replay.out.find("condition (a) violated"), std::string::npos);
}
