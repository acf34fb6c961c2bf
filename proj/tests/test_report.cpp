#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "curvmeasure/error.hpp"
#include "curvmeasure/report.hpp"

using namespace curvmeasure;

TEST_SUITE("report") {
  TEST_CASE("fixed and shortest formatting") {
    CHECK(format_fixed17(0.1) == "0.10000000000000001");
    CHECK(format_fixed17(3.0) == "3");
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(format_shortest(1e300) == "1e+300");
    CHECK(format_fixed17(std::numeric_limits<double>::quiet_NaN()) == "nan");
  }

  TEST_CASE("csv round-trips losslessly") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 200; ++i) rows.push_back({u(rng), std::ldexp(u(rng), -40), static_cast<double>(i)});
    const std::string text = render_csv({"a", "b", "c"}, rows);
    CHECK(text.find('\r') == std::string::npos);
    std::vector<std::string> header;
    const auto back = parse_csv(text, &header);
    CHECK(header == std::vector<std::string>{"a", "b", "c"});
    CHECK(back == rows);
    CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), InputError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), InputError);
  }

  TEST_CASE("json rendering is sorted and stable") {
    Json j = {{"zeta", 1.5}, {"alpha", {{"b", true}, {"a", Json::array({0.1, 2})}}}, {"nan", std::nan("")}};
    const std::string s = render_json(j);
    CHECK(s.find("\"alpha\"") < s.find("\"zeta\""));
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("null") != std::string::npos);
    CHECK(Json::parse(s)["zeta"] == 1.5);
    CHECK(render_json(j) == s);
    const std::string t = render_text(j);
    CHECK(t == "alpha.a[0] = 0.10000000000000001\nalpha.a[1] = 2\nalpha.b = true\nnan = nan\nzeta = 1.5\n");
  }

  TEST_CASE("digest") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
  }
}
