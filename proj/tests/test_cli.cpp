#include <gtest/gtest.h>

#include "kummerian/cli.hpp"

using namespace kummerian;
using namespace kummerian::cli;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name; }

CommandOptions with_precision(int n) {
    CommandOptions o;
    o.precision = n;
    return o;
}

}  // namespace

TEST(Cli, CheckExamples) {
    auto o = with_precision(2);
    o.theta = "1";
    const auto r1 = cmd_check(fixture("zp_p3.pres"), o);
    EXPECT_EQ(r1.exit_code, exit_code::kNegative);
    EXPECT_EQ(r1.json["status"], "REFUTED");
    EXPECT_EQ(r1.json["witness"]["residue"], 3);

    o.theta = "7,4,1";
    EXPECT_EQ(cmd_check(fixture("free3.pres"), o).exit_code, exit_code::kOk);

    const auto r3 = cmd_check(fixture("demushkin_p3_f2.pres"), CommandOptions{});
    EXPECT_EQ(r3.exit_code, exit_code::kOk);
    EXPECT_EQ(r3.json["precision"], 5);
}

TEST(Cli, CheckErrors) {
    CommandOptions o;
    EXPECT_EQ(cmd_check(fixture("zp_p3.pres"), o).exit_code, exit_code::kError);  // no theta
    o.theta = "2";
    EXPECT_EQ(cmd_check(fixture("zp_p3.pres"), o).exit_code, exit_code::kError);  // not 1 mod 3
    o.theta = "4";
    o.precision = 3;
    const auto r = cmd_check(fixture("zp_p3.pres"), o);  // theta(x^3) = 10 mod 27
    EXPECT_EQ(r.exit_code, exit_code::kError);
    EXPECT_NE(r.json["error"]["message"].get<std::string>().find("not well defined"), std::string::npos);
    EXPECT_EQ(cmd_check(fixture("missing.pres"), o).exit_code, exit_code::kError);
}

TEST(Cli, ParseErrorCarriesPosition) {
    CommandOptions o;
    o.theta = "1";
    const auto r = cmd_check(std::string(FIXTURES_DIR) + "/../tests/data/bad.pres", o);
    EXPECT_EQ(r.exit_code, exit_code::kError);
    EXPECT_EQ(r.json["error"]["line"], 3);
    EXPECT_EQ(r.json["error"]["column"], 9);
}

TEST(Cli, SearchExamples) {
    const auto r1 = cmd_search(fixture("pow_comm_p3.pres"), with_precision(2));
    EXPECT_EQ(r1.exit_code, exit_code::kNegative);
    EXPECT_EQ(r1.json["status"], "EMPTY");
    EXPECT_EQ(r1.json["search"]["level"], 2);
    EXPECT_EQ(cmd_search(fixture("two_relator_p3.pres"), with_precision(2)).json["status"], "EMPTY");
    const auto r3 = cmd_search(fixture("demushkin_p3_f2.pres"), with_precision(5));
    EXPECT_EQ(r3.exit_code, exit_code::kOk);
    EXPECT_EQ(r3.json["solutions"], Json::parse("[[1, 91]]"));
    auto capped = with_precision(3);
    capped.limits.max_branches = 10;
    EXPECT_EQ(cmd_search(fixture("free3.pres"), capped).exit_code, exit_code::kCapExceeded);
}

TEST(Cli, CupOmegaMassey) {
    const auto cup = cmd_cup(fixture("power_comm_p3_f2_d5.pres"), {});
    EXPECT_EQ(cup.json["pairings"][0]["cup"], Json::parse("[[2, 3, 1], [4, 5, 1]]"));
    EXPECT_EQ(cup.json["pairings"][0]["bockstein"], Json::parse("[0, 0, 0, 0, 0]"));

    CommandOptions o;
    o.word = "[[x1,x2],x3]";
    EXPECT_EQ(cmd_omega("", o).json["omega"], 3);

    o.phi = "1,0,0;1,0,0;1,0,0";
    const auto m = cmd_massey(fixture("power_comm_p3_f1.pres"), o);
    EXPECT_EQ(m.json["massey"]["essential"], true);
    EXPECT_EQ(m.json["massey"]["witness"], nullptr);

    o.phi = "1,0;1,0,0;1,0,0";
    EXPECT_EQ(cmd_massey(fixture("power_comm_p3_f1.pres"), o).exit_code, exit_code::kError);
    o.phi = "1,0,0;1,0,0";
    EXPECT_EQ(cmd_massey(fixture("power_comm_p3_f1.pres"), o).json["massey"]["n"], 2);
}

TEST(Cli, JsonSchemaAndDeterminism) {
    const auto a = cmd_search(fixture("demushkin_p3_f2.pres"), with_precision(5));
    const auto b = cmd_search(fixture("demushkin_p3_f2.pres"), with_precision(5));
    EXPECT_EQ(a.json.dump(), b.json.dump());
    for (const char* key : {"tool", "command", "p", "precision", "status", "witness", "solutions", "pairings", "massey", "inputs_digest", "version"})
        EXPECT_TRUE(a.json.contains(key)) << key;
    EXPECT_FALSE(a.json.contains("timing_ms"));
    auto timed = with_precision(5);
    timed.timing = true;
    const auto c = cmd_search(fixture("demushkin_p3_f2.pres"), timed);
    EXPECT_TRUE(c.json.contains("timing_ms"));
    EXPECT_EQ(c.exit_code, a.exit_code);
    EXPECT_NE(cmd_search(fixture("demushkin_p3_f2.pres"), with_precision(4)).json["inputs_digest"], a.json["inputs_digest"]);
}

TEST(Cli, JsonMatching) {
    const auto actual = Json::parse(R"({"a": 1, "b": {"c": [1, {"d": 2, "e": 3}]}})");
    EXPECT_TRUE(json_matches(Json::parse(R"({"b": {"c": [1, {"d": 2}]}})"), actual));
    EXPECT_FALSE(json_matches(Json::parse(R"({"b": {"c": [1]}})"), actual));
    EXPECT_FALSE(json_matches(Json::parse(R"({"z": 1})"), actual));
}

TEST(Cli, RunAllFixtures) {
    const auto r = cmd_run_all(FIXTURES_DIR, {});
    EXPECT_EQ(r.exit_code, exit_code::kOk) << r.text;
    EXPECT_GT(r.json["passed"].get<int>(), 20);
    EXPECT_EQ(r.json["failed"], 0);
    EXPECT_EQ(cmd_run_all(std::string(FIXTURES_DIR) + "/nope", {}).exit_code, exit_code::kError);
}

TEST(Cli, Fnv1a) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
