#include <gtest/gtest.h>

#include <regex>

#include <opetopic/opetopic.hpp>

using namespace opetopic;

TEST(Json, TrunkHasNoChildren) {
    auto j = to_json(trunk());
    EXPECT_EQ(j["level"], 2);
    ASSERT_TRUE(j.contains("op"));
    EXPECT_TRUE(j["children"].is_array());
    EXPECT_TRUE(j["children"].empty());
}

TEST(Json, BareEdgeUsesTheEdgeKey) {
    auto j = to_json(planar_leaf());
    EXPECT_TRUE(j.contains("edge"));
    EXPECT_FALSE(j.contains("children"));
}

TEST(Json, ChildrenInPlanarOrder) {
    auto j = to_json(parse_planar("((||)|)"));
    ASSERT_EQ(j["children"].size(), 2u);
    EXPECT_TRUE(j["children"][0].contains("op"));
    EXPECT_TRUE(j["children"][1].contains("edge"));
}

TEST(Json, WhiteTreeListsWhites) {
    auto j = to_json(WhiteTree{2, parse_planar("((|)(|))"), {1, 2}});
    EXPECT_EQ(j["whites"], json::parse("[1,2]"));
}

TEST(Json, DirectionMatrixEntries) {
    auto x = from_configuration({{0, 0}, {3, 4}});
    auto j = to_json(x);
    EXPECT_EQ(j["dim"], 2);
    EXPECT_EQ(j["points"].size(), 2u);
    EXPECT_EQ(j["entries"]["0,1"], json::parse(R"([["3","5"],["4","5"]])"));
}

TEST(Json, CertificateAndBetti) {
    auto j = to_json(certify_contractible(c_category(1)));
    EXPECT_TRUE(j.contains("kind"));
    EXPECT_EQ(j["positive"], true);
}

TEST(Json, MorphismRoundTripsThroughText) {
    auto f = inner_face(parse_planar("((||)|)"), 1);
    auto j = to_json(f);
    EXPECT_EQ(json::parse(j.dump()), j);
    EXPECT_EQ(j["edges"], json::parse("[0,2,3,4]"));
}

TEST(Json, ReportsCarryASchemaVersion) {
    auto r = verify_c_category({});
    auto j = r.to_json();
    EXPECT_EQ(j["schema"], report_schema_version);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["suite"], "c-category");
}

namespace {
int count_matches(const std::string& text, const std::string& pattern) {
    std::regex re(pattern);
    return (int)std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator());
}
}  // namespace

TEST(Dot, COneHasNineNodes) {
    auto dot = to_dot(c_category(1), "C[1]");
    EXPECT_EQ(count_matches(dot, "\\n  n[0-9]+ \\[label="), 9);
    EXPECT_EQ(dot, to_dot(c_category(1), "C[1]"));
}

TEST(Dot, QuotesAreEscaped) { EXPECT_EQ(dot_quote("a\"b"), "\"a\\\"b\""); }

TEST(Dot, PlanarTreeHasOneNodePerVertexAndLeaf) {
    auto dot = planar_dot(parse_planar("((||)|)"));
    EXPECT_EQ(count_matches(dot, "shape=circle"), 2);
    EXPECT_EQ(count_matches(dot, "l[0-9]+ \\[shape=point\\]"), 3);
}
