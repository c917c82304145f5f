#include <gtest/gtest.h>

#include "zt6g/scenario.hpp"

using namespace zt6g;

namespace {

const std::string kDir = ZT6G_SCENARIO_DIR;

const char* kMinimal = R"({
  "topology": {
    "communities": [
      {"name": "A", "population": 10},
      {"name": "B", "population": 10}
    ],
    "links": [["A", "B"]]
  },
  "attack_stages": [
    {"start_s": 5, "attackers": ["A"], "victim": "64512:2:1"}
  ],
  "epidemic": {"i0": 2}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return s.replace(at, from.size(), to);
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text, "x.json");
    } catch (const InvalidScenario& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(ScenarioTest, BundledFig5HasExperimentParameters) {
    const auto s = load_scenario(kDir + "/paper_fig5.json");
    ASSERT_EQ(s.topology.communities().size(), 4u);
    for (const auto& c : s.topology.communities()) {
        EXPECT_EQ(c.population, 1000u);
    }
    EXPECT_EQ(s.topology.links().size(), 4u);
    const auto id = [&](const char* n) { return s.topology.find_by_name(n)->id; };
    EXPECT_TRUE(s.topology.linked(id("A"), id("B")));
    EXPECT_TRUE(s.topology.linked(id("A"), id("C")));
    EXPECT_TRUE(s.topology.linked(id("B"), id("D")));
    EXPECT_TRUE(s.topology.linked(id("C"), id("D")));
    EXPECT_FALSE(s.topology.linked(id("A"), id("D")));
    EXPECT_EQ(s.normal.duration_s, 100);
    EXPECT_DOUBLE_EQ(s.normal.cross_prob, 0.1);
    EXPECT_EQ(s.normal.rate_pps, 5u);
    EXPECT_EQ(s.epidemic.i0, 100u);
    EXPECT_DOUBLE_EQ(s.epidemic.beta, 0.2);
    EXPECT_DOUBLE_EQ(s.epidemic.gamma, 0.2);
    ASSERT_EQ(s.stages.size(), 2u);
    EXPECT_EQ(s.stages[0].victim.community_id, id("A"));
    EXPECT_EQ(s.stages[1].victim.community_id, id("D"));
    EXPECT_EQ(s.stages[1].attackers.size(), 3u);
    EXPECT_EQ(s.stages[1].intensity_pps, 10u);
    EXPECT_EQ(s.instrumented_stage(), 1u);
    EXPECT_DOUBLE_EQ(s.engine.trust.threshold, 0.75);
    EXPECT_EQ(s.engine.validity_period_s, 1);
    EXPECT_EQ(s.monte_carlo.runs, 100u);
}

TEST(ScenarioTest, Fig6DiffersOnlyByName) {
    auto a = scenario_to_json(load_scenario(kDir + "/paper_fig5.json"));
    auto b = scenario_to_json(load_scenario(kDir + "/paper_fig6.json"));
    a.erase("name");
    b.erase("name");
    EXPECT_EQ(a, b);
}

TEST(ScenarioTest, DefaultsAndResolvedEchoRoundTrip) {
    const auto s = parse_scenario(kMinimal);
    EXPECT_EQ(s.seed_time(), 5);
    EXPECT_EQ(s.instrumented_stage(), 0u);
    EXPECT_EQ(s.engine.architecture, Architecture::Zta6g);
    const auto echo = scenario_to_json(s);
    const auto again = scenario_to_json(scenario_from_json(echo));
    EXPECT_EQ(echo, again);
    EXPECT_EQ(echo.at("epidemic").at("seed_at_s"), 5);
}

TEST(ScenarioTest, MalformedJsonReportsLine) {
    const std::string text = "{\n  \"name\": \"x\",\n  \"topology\": {\n    oops\n}";
    const auto msg = error_of(text);
    EXPECT_NE(msg.find("x.json:4:"), std::string::npos) << msg;
}

TEST(ScenarioTest, ValidationErrorsPointAtOffendingLine) {
    const auto msg = error_of(replace(kMinimal, "\"population\": 10},\n      {\"name\": \"B\"",
                                      "\"population\": 0},\n      {\"name\": \"B\""));
    EXPECT_NE(msg.find("x.json:4:"), std::string::npos) << msg;
}

TEST(ScenarioTest, UnknownArchitectureListsValidNames) {
    auto text = replace(kMinimal, "\"epidemic\": {\"i0\": 2}", "\"epidemic\": {\"i0\": 2},\n  \"engine\": {\"architecture\": \"zta7g\"}");
    const auto msg = error_of(text);
    EXPECT_NE(msg.find("zta7g"), std::string::npos);
    EXPECT_NE(msg.find("zta6g, tbpf, tris, permit_all"), std::string::npos) << msg;
    EXPECT_NE(msg.find("x.json:13:"), std::string::npos) << msg;
}

TEST(ScenarioTest, RejectsInvalidConfigurations) {
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"\"links\": [[\"A\", \"B\"]]", "\"links\": []"},
        {"\"links\": [[\"A\", \"B\"]]", "\"links\": [[\"A\", \"Q\"]]"},
        {"\"links\": [[\"A\", \"B\"]]", "\"links\": [[\"A\", \"A\"]]"},
        {"\"victim\": \"64512:2:1\"", "\"victim\": \"64512:9:1\""},
        {"\"victim\": \"64512:2:1\"", "\"victim\": \"64512:2:11\""},
        {"\"victim\": \"64512:2:1\"", "\"victim\": \"64512:2\""},
        {"\"attackers\": [\"A\"]", "\"attackers\": []"},
        {"\"i0\": 2", "\"i0\": 11"},
        {"\"i0\": 2", "\"i0\": 2, \"gamma\": 1.5"},
        {"\"i0\": 2", "\"i0\": 2, \"beta\": -1"},
        {"\"i0\": 2", "\"i0\": 2, \"seed_at_s\": 6"},
        {"\"i0\": 2", "\"i0\": \"two\""},
        {"\"start_s\": 5", "\"start_s\": -1"},
    };
    for (const auto& [from, to] : cases) {
        EXPECT_THROW(parse_scenario(replace(kMinimal, from, to)), InvalidScenario) << to;
    }
}

TEST(ScenarioTest, StagesMustBeOrdered) {
    auto text = replace(kMinimal, "{\"start_s\": 5, \"attackers\": [\"A\"], \"victim\": \"64512:2:1\"}",
                        "{\"start_s\": 5, \"attackers\": [\"A\"], \"victim\": \"64512:2:1\"},\n"
                        "    {\"start_s\": 5, \"attackers\": [\"B\"], \"victim\": \"64512:1:1\"}");
    EXPECT_THROW(parse_scenario(text), InvalidScenario);
}

TEST(ScenarioTest, UnreadableFileIsIoError) {
    EXPECT_THROW(load_scenario(kDir + "/does_not_exist.json"), std::ios_base::failure);
}
