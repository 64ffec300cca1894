#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "workspace.hpp"

using nlohmann::json;

namespace {

const std::string kWorkspace = std::string(SURPLUS_TEST_DATA) + "/workspace.json";

struct Run {
  int code;
  std::string out;
  std::string err;
  json body() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args, const std::string& workspace = kWorkspace) {
  std::vector<std::string> all{"surplus", "--workspace", workspace};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : all) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = surplus::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(CliEval, Values) {
  auto r = cli({"eval", "es50", "x"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.body()["value"], 1.0);
  r = cli({"eval", "maxloss", "const"});
  EXPECT_EQ(r.body()["value"], -3.0);
  r = cli({"eval", "var60", "const"});
  EXPECT_EQ(r.body()["value"], -3.0);
  r = cli({"eval", "sf_sq", "y"});
  EXPECT_EQ(r.body()["value"], 2.5);
}

TEST(CliEval, UnknownNameIsReferenceError) {
  const auto r = cli({"eval", "nope", "x"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(json::parse(r.err).contains("error"));
  EXPECT_EQ(cli({"eval", "es50", "nope"}).code, 2);
}

TEST(CliInput, MalformedInputIsInputError) {
  EXPECT_EQ(cli({"eval", "es50", "x"}, std::string(SURPLUS_TEST_DATA) + "/missing.json").code, 3);
  EXPECT_EQ(cli({"eval", "es50", "x"}, std::string(SURPLUS_TEST_DATA) + "/position.csv").code, 3);
  EXPECT_EQ(cli({"check", "si", "A_var", "--trials", "0"}).code, 3);
  EXPECT_EQ(cli({"frobnicate"}).code, 3);
  EXPECT_EQ(cli({"polar", "support", "Q"}).code, 3);
}

TEST(CliAccept, Membership) {
  EXPECT_EQ(cli({"accept", "A_es", "x_es"}).body()["accepted"], true);
  EXPECT_EQ(cli({"accept", "A_es", "y_es"}).body()["accepted"], false);
}

TEST(CliCheck, VerdictsAndExitCodes) {
  EXPECT_EQ(cli({"check", "si", "A_var"}).code, 0);
  const auto es = cli({"check", "si", "A_es"});
  EXPECT_EQ(es.code, 1);
  EXPECT_EQ(es.body()["verdict"], "counterexample");
  EXPECT_EQ(es.body()["seed"], 7);
  EXPECT_TRUE(es.body()["witness"].contains("X"));
  EXPECT_EQ(cli({"check", "si", "A_es", "--seed", "3"}).body()["seed"], 3);
  EXPECT_EQ(cli({"check", "si-pos", "rho_var", "--trials", "300"}).code, 0);
  EXPECT_EQ(cli({"check", "si-pos", "rho_es", "--trials", "300"}).code, 1);
  EXPECT_EQ(cli({"check", "band-stability", "A_span"}).code, 0);
  EXPECT_EQ(cli({"check", "equivalences", "A_both"}).code, 0);
  EXPECT_EQ(cli({"check", "convexity", "A_both"}).code, 0);
  EXPECT_EQ(cli({"check", "s-additive", "sf_sq"}).code, 1);
  EXPECT_EQ(cli({"check", "si", "es75"}).code, 1);
  EXPECT_EQ(cli({"check", "nonsense", "A_var"}).code, 3);
}

TEST(CliDecompose, BoxExample) {
  const auto r = cli({"decompose", "box"}, std::string(SURPLUS_TEST_DATA) + "/box3.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto b = r.body();
  EXPECT_EQ(b["E1"], json::parse(R"(["ω1"])"));
  EXPECT_EQ(b["E2"], json::parse(R"(["ω2"])"));
  EXPECT_EQ(b["E3"], json::parse(R"(["ω3"])"));
}

TEST(CliNorm, PowerAndLinfty) {
  EXPECT_NEAR(cli({"norm", "z", "--orlicz", "power:2"}).body()["norm"].get<double>(), 2.2360680, 1e-7);
  EXPECT_EQ(cli({"norm", "z", "--orlicz", "linfty"}).body()["norm"], 3.0);
  const auto t = cli({"norm", "z", "--orlicz", "power:2", "--table"});
  EXPECT_EQ(t.out, "norm  2.236067978\n");
}

TEST(CliExtend, SeriesAndDivergence) {
  const auto r = cli({"extend", "ws", "minus_n", "--tol", "1e-12"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.body()["value"].get<double>(), 2.0, 1e-9);
  EXPECT_TRUE(r.body()["trace"].is_array());
  EXPECT_EQ(cli({"extend", "sup", "minus_n"}).body()["value"], "inf");
  EXPECT_NEAR(cli({"extend", "ws", "minus_n", "--s-additive", "1"}).body()["value"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(cli({"extend", "ws", "minus_n", "--uniqueness"}).code, 0);
}

TEST(CliPolarAndDual, Reports) {
  EXPECT_EQ(cli({"polar", "support", "C"}).body()["sup"], 1.0);
  EXPECT_EQ(cli({"polar", "member", "C", "--density", "0.1", "0.1"}).body()["status"], "member");
  EXPECT_EQ(cli({"polar", "member", "C", "--density", "5", "5"}).body()["status"], "not member");
  const auto rb = cli({"polar", "robust", "C", "z"});
  EXPECT_TRUE(rb.body().contains("witness"));
  const auto d = cli({"dual", "es50", "x"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NEAR(d.body()["dual"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(cli({"dual", "var40", "x"}).code, 3);
}

TEST(CliDeterminism, IdenticalRunsProduceIdenticalBytes) {
  for (const std::vector<std::string> args : {std::vector<std::string>{"check", "si", "A_es"},
                                              std::vector<std::string>{"dual", "maxloss", "x"},
                                              std::vector<std::string>{"decompose", "A_box", "--verify"}}) {
    const auto a = cli(args), b = cli(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
}

TEST(Workspace, NamesMustBeUnique) {
  const auto j = json::parse(R"({"scenarios": 2, "positions": {"a": [1, 2]}, "functionals": {"a": {"kind": "max_loss"}}})");
  EXPECT_ANY_THROW(surplus::cli::Workspace::from_json(j));
}

TEST(Workspace, PositionRecordsAndSetReferences) {
  const auto j = json::parse(R"({"scenarios": ["a", "b"],
    "positions": [{"name": "x", "payoffs": [1, -1]}],
    "acceptance_sets": {"u": {"kind": "union", "of": ["v", "c"]}, "v": {"kind": "var", "alpha": 0.3},
                        "c": {"kind": "positive_cone"}},
    "functionals": {"r": {"kind": "from_acceptance", "set": "v", "S": [1, 1]}}})");
  const auto ws = surplus::cli::Workspace::from_json(j);
  EXPECT_EQ(ws.position("x")[1], -1.0);
  EXPECT_FALSE(ws.acceptance_set("u").contains(ws.position("x")));
  EXPECT_THROW(ws.functional("nope"), surplus::cli::ReferenceError);
  const auto cyclic = json::parse(R"({"scenarios": 2, "acceptance_sets": {"u": {"kind": "union", "of": ["u"]}}})");
  EXPECT_ANY_THROW(surplus::cli::Workspace::from_json(cyclic));
}
