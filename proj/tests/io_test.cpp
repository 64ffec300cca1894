#include <gtest/gtest.h>

#include <sstream>

#include <surplus/error.hpp>
#include <surplus/io.hpp>

using namespace surplus;
using nlohmann::json;

TEST(SpaceJson, LabelsAndPriors) {
  const auto s = io::space_from_json(json::parse(R"({"scenarios": ["up", "down"],
      "priors": [{"name": "P", "weights": [0.25, 0.75]}, {"name": "Q", "weights": [1, 0]}]})"));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.prior_index("Q"), 1u);
  EXPECT_EQ(s.weights(0)[1], 0.75);
  const auto back = io::space_from_json(io::to_json(s));
  EXPECT_EQ(back.labels(), s.labels());
  EXPECT_EQ(back.prior(1).weights, s.prior(1).weights);
}

TEST(SpaceJson, CountGivesUniformPrior) {
  const auto s = io::space_from_json(json::parse(R"({"scenarios": 4})"));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.weights(0)[2], 0.25);
}

TEST(SpaceJson, RejectsMalformed) {
  EXPECT_THROW(io::space_from_json(json::parse(R"({"priors": []})")), InputError);
  EXPECT_THROW(io::space_from_json(json::parse(R"({"scenarios": ["a"], "priors": [{"name": "P", "weights": [0.5]}]})")),
               InputError);
  EXPECT_THROW(io::space_from_json(json::parse(R"({"scenarios": ["a", "a"]})")), InputError);
}

TEST(PositionJson, ArrayMapAndCsv) {
  const auto s = ScenarioSpace::uniform(3);
  EXPECT_EQ(io::position_from_json(s, json::parse("[1, -2, 3]")), (Position{1, -2, 3}));
  EXPECT_EQ(io::position_from_json(s, json::parse(R"({"w2": 5})")), (Position{0, 5, 0}));
  std::istringstream csv("scenario,value\n# comment\nw3, 1.5\nw1,-2\n");
  EXPECT_EQ(io::position_from_csv(s, csv), (Position{-2, 0, 1.5}));
  std::istringstream bad("w1;4\n");
  EXPECT_THROW(io::position_from_csv(s, bad), InputError);
  std::istringstream unknown("w9,4\n");
  EXPECT_THROW(io::position_from_csv(s, unknown), InputError);
  EXPECT_THROW(io::position_from_json(s, json::parse("[1, 2]")), InputError);
  EXPECT_THROW(io::position_from_json(s, json::parse(R"(["x", 2, 3])")), InputError);
}

TEST(MeasureJson, RoundTrip) {
  const auto s = ScenarioSpace::uniform(2);
  const auto mu = io::measure_from_json(s, json::parse(R"({"terms": [{"prior": "P", "density": [1, 0], "coeff": 2}]})"));
  EXPECT_DOUBLE_EQ(pair(s, Position{2, 4}, mu), 2.0);
  const auto back = io::measure_from_json(s, io::to_json(s, mu));
  EXPECT_DOUBLE_EQ(pair(s, Position{2, 4}, back), 2.0);
}

TEST(OrliczSpec, StringAndJsonForms) {
  EXPECT_EQ(io::orlicz_from_string("power:2").exponent(), 2.0);
  EXPECT_EQ(io::orlicz_from_string("linfty").kind(), OrliczFunction::Kind::linfty);
  EXPECT_EQ(io::orlicz_from_string("scaled_power:3:0.5").scale(), 0.5);
  EXPECT_EQ(io::orlicz_from_json(json::parse(R"({"kind": "linfty_type"})")).kind(), OrliczFunction::Kind::linfty);
  EXPECT_THROW(io::orlicz_from_string("cubic"), InputError);
  EXPECT_THROW(io::orlicz_from_string("power:x"), InputError);
}

TEST(SolidJson, BoxAndPolytope) {
  const auto b = io::solid_from_json(json::parse(R"({"kind": "box", "upper": [1, "inf"]})"));
  EXPECT_FALSE(b.claims_radially_bounded());
  const auto p = io::solid_from_json(json::parse(R"({"kind": "polytope", "vertices": [[1, 0], [0, 1]]})"));
  EXPECT_TRUE(p.contains(Position{0.5, 0.5}));
  EXPECT_THROW(io::solid_from_json(json::parse(R"({"kind": "ball"})")), InputError);
}

TEST(SequenceJson, HeadAndTail) {
  const auto x = io::seq_from_json(json::parse(R"({"head": [4, 5], "tail": {"kind": "affine", "a": -1, "b": 0}})"));
  EXPECT_EQ(x[1], 4.0);
  EXPECT_EQ(x[2], 5.0);
  EXPECT_EQ(x[3], -3.0);
  const auto gq = io::seq_from_json(json::parse(R"({"tail": {"kind": "geometric", "c": 2, "r": 0.5}})"));
  EXPECT_EQ(gq[2], 0.5);
  EXPECT_THROW(io::seq_from_json(json::parse(R"({"tail": {"kind": "geometric", "c": 2, "r": 1.5}})")), InputError);
  const json j = x;
  EXPECT_EQ(j["head"], json::parse("[4.0, 5.0]"));
  EXPECT_EQ(j["tail"]["kind"], "affine");
}
