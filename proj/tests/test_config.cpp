#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chialvo/config.hpp"

#include <cmath>
#include <limits>

using namespace chialvo;

TEST_CASE("parse with defaults") {
    const auto c = parse_config("a = 0.5\nb = 0.4");
    CHECK(c.real("a") == 0.5);
    CHECK(c.real("b") == 0.4);
    CHECK(c.real("c") == 0.89);
    CHECK(c.real("k0") == -0.44);
    bool a_defaulted = false, c_defaulted = false;
    for (const auto& k : c.defaulted()) {
        a_defaulted = a_defaulted || k == "a";
        c_defaulted = c_defaulted || k == "c";
    }
    CHECK_FALSE(a_defaulted);
    CHECK(c_defaulted);
}

TEST_CASE("comments, blank lines and overrides") {
    const auto c = parse_config("# header\n\nk = 1.5  # trailing\nk = 2.5\n  seed = 9\n");
    CHECK(c.real("k") == 2.5);
    CHECK(c.u64("seed") == 9);
}

TEST_CASE("errors name the offending line") {
    try {
        parse_config("a = fast");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    try {
        parse_config("a = 0.5\n\nbogus = 3");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("no equals sign"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_points = 2.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("direction = sideways"), ConfigError);
    CHECK_THROWS_AS(parse_config("hub_in_ring = maybe"), ConfigError);
}

TEST_CASE("missing required key") {
    const Schema s{{"alpha", ValueType::real, std::nullopt, {}}, {"beta", ValueType::integer, std::string("3"), {}}};
    const auto ok = parse_config("alpha = 1", s);
    CHECK(ok.integer("beta") == 3);
    try {
        parse_config("beta = 4", s);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
}

TEST_CASE("round trip of a parameter block") {
    const std::string text =
        "a = 0.5\nb = 0.4\nc = 0.89\nk0 = -0.44\nk = -0.3\nalpha = 0.1\nbeta = 0.1\nk1 = 0.1\nk2 = 0.2\n"
        "direction = backward\nhub_in_ring = false\nseed = 18446744073709551615\n";
    const auto c = parse_config(text);
    const auto d = parse_config(emit_config(c));
    CHECK(c.values() == d.values());
    CHECK(emit_config(c) == emit_config(d));
    CHECK(d.text("direction") == "backward");
    CHECK_FALSE(d.flag("hub_in_ring"));
    CHECK(d.u64("seed") == 18446744073709551615ull);
}

TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, -0.44, 1e-300, 123456789.125, 2.0 / 3.0, 5e-324}) {
        const auto s = format_double(v);
        CHECK(parse_double(s) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::isnan(*parse_double("nan")));
    CHECK_FALSE(parse_double("1.0x").has_value());
    CHECK_FALSE(parse_double("").has_value());
}

TEST_CASE("schema has unique keys") {
    const auto& s = default_schema();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) CHECK(s[i].name != s[j].name);
}
