#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "multiquad/io.hpp"

using namespace multiquad;

TEST_CASE("config parsing, analytic measures") {
    const std::string text = R"({
      "r": 2,
      "backend": "rational",
      "measures": [
        { "kind": "analytic", "name": "uniform", "params": { "a": 0, "b": 1 } },
        { "kind": "analytic", "name": "power", "params": { "alpha": "1/2" } }
      ]
    })";
    MeasureSystem sys = parse_system(text);
    CHECK(sys.r == 2);
    CHECK(sys.backend == Backend::rational);
    CHECK(sys.moment_rat(1, 2) == Rat(1, 3));
    CHECK(sys.moment_rat(2, 0) == Rat(2, 3));
}

TEST_CASE("config parsing, table and discrete measures") {
    const std::string text = R"({
      "measures": [
        { "kind": "table", "moments": ["1", "1/2", "1/3", 0.25] },
        { "kind": "discrete", "points": [0, "1/2", 1], "masses": ["1/4", "1/2", "1/4"] }
      ]
    })";
    MeasureSystem sys = parse_system(text);
    CHECK(sys.r == 2);
    CHECK(sys.backend == Backend::float64);
    CHECK(sys.moment_rat(1, 3) == Rat(1, 4));
    CHECK(sys.moment_rat(2, 1) == Rat(1, 2));
    CHECK_THROWS_AS(sys.moment_rat(1, 4), OutOfTable);
}

TEST_CASE("config rejection") {
    CHECK_THROWS_AS(parse_system("not json"), BadInput);
    CHECK_THROWS_AS(parse_system("[1,2]"), BadInput);
    CHECK_THROWS_AS(parse_system(R"({"measures": []})"), BadInput);
    CHECK_THROWS_AS(parse_system(R"({"r": 3, "measures": [{"kind":"table","moments":[1]}]})"),
                    BadInput);
    CHECK_THROWS_AS(parse_system(R"({"measures": [{"kind":"blob"}]})"), BadInput);
    CHECK_THROWS_AS(parse_system(R"({"measures": [{"kind":"analytic","name":"nope"}]})"),
                    UnknownFormula);
    CHECK_THROWS_AS(parse_system(R"({"backend":"quad","measures":[{"kind":"table","moments":[1]}]})"),
                    BadInput);
    CHECK_THROWS_AS(
        parse_system(R"({"measures": [{"kind":"discrete","points":[1],"masses":[1,2]}]})"),
        BadInput);
    CHECK_THROWS_AS(load_system("/definitely/not/here.json"), BadInput);
}

TEST_CASE("float formatting is deterministic and reversible") {
    CHECK(json_double(0.5) == "0.5");
    CHECK(json_double(-0.25) == "-0.25");
    CHECK(json_double(1.0) == "1");
    const double x = 0.2113248654051871;
    CHECK(json_double(x) == json_double(x));
    // 17 significant digits reproduce the double exactly
    CHECK(std::stod(json_double(x)) == x);
    CHECK(std::stod(json_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("json escaping") {
    CHECK(json_string("plain") == "\"plain\"");
    CHECK(json_string("a\"b") == "\"a\\\"b\"");
    CHECK(json_string("a\\b\n") == "\"a\\\\b\\n\"");
}

TEST_CASE("rule serialization is byte stable") {
    MeasureSystem sys = sys_power_family(2);
    Rule r1 = build_rule(sys, 4);
    Rule r2 = build_rule(sys, 4);
    const std::string j1 = rule_to_json(r1);
    const std::string j2 = rule_to_json(r2);
    CHECK(j1 == j2);
    CHECK(j1.find("\"n\":4") != std::string::npos);
    CHECK(j1.find("\"vector_order\":[5,5]") != std::string::npos);
    CHECK(j1.find("\"witness\":{\"available\":true") != std::string::npos);
    const std::string csv = rule_to_csv(r1);
    // header plus one line per node
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.rfind("node,w1,w2", 0) == 0);
}

TEST_CASE("exact rule serialization carries the node polynomial") {
    MeasureSystem sys = sys_xdx_pair(Backend::rational);
    ExactRule rule = build_rule_exact(sys, 2);
    const std::string j = exact_rule_to_json(rule);
    CHECK(j.find("\"backend\":\"rational\"") != std::string::npos);
    CHECK(j.find("\"node_polynomial\":[\"1/6\",\"-1\",\"1\"]") != std::string::npos);
    CHECK(j.find("\"weight_sums\":[\"1\",\"1/2\"]") != std::string::npos);
    CHECK(j.find("\"order_ok\":true") != std::string::npos);
    ExactRule again = build_rule_exact(sys, 2);
    CHECK(exact_rule_to_json(again) == j);
    const std::string csv = exact_rule_to_csv(rule);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("moment dump in both backends") {
    MeasureSystem sysr = sys_power_family(2, Backend::rational);
    const std::string jr = moments_to_json(sysr, 3);
    CHECK(jr.find("\"moments\":[[\"1\",\"1/2\",\"1/3\"],[\"2/3\",\"2/5\",\"2/7\"]]") !=
          std::string::npos);
    MeasureSystem sysf = sys_power_family(2);
    const std::string jf = moments_to_json(sysf, 2);
    CHECK(jf.find("\"moments\":[[1,0.5],[") != std::string::npos);
}

TEST_CASE("config file round trip through the loader") {
    const std::string path = "io_roundtrip_config.json";
    {
        std::ofstream out(path);
        out << R"({"measures":[{"kind":"table","moments":["1","1/2","1/3","1/4"]}]})";
    }
    MeasureSystem sys = load_system(path);
    CHECK(sys.r == 1);
    CHECK(sys.moment_rat(1, 3) == Rat(1, 4));
    std::remove(path.c_str());
}
