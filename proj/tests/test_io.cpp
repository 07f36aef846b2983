#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "torusopt/io.hpp"

using namespace torusopt;
using V = Vec2<double>;

TEST_CASE("configuration JSON round trip") {
  const auto c = canonical_config(0.8, 3);
  const Json j = config_to_json(c);
  CHECK(j["points"].size() == 6);
  CHECK(j["r"][1].get<double>() == c.lattice().r[1]);
  const auto back = config_from_json(Json::parse(j.dump()));
  CHECK(back.points() == c.points());
  CHECK(back.lattice() == c.lattice());
}

TEST_CASE("configuration JSON rejects malformed input") {
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"points": [[0, 0]]})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"points": [[0]], "r": [1, 1]})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"points": [], "r": [1, 1]})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"points": [[0, 0]], "r": [1, -1]})")), std::invalid_argument);
}

TEST_CASE("long double strings keep 21 digits and tiny exponents") {
  CHECK(long_double_string(1.0L) == "1.00000000000000000000e+00");
  // 2^-1300 = 4.58147833099426224058e-392 (mpmath), far below the double range.
  const long double tiny = std::ldexp(1.0L, -1300);
  const std::string s = long_double_string(tiny);
  CHECK(s.substr(0, 22) == "4.58147833099426224058");
  CHECK(s.substr(s.size() - 4) == "-392");
  std::istringstream in(s);
  long double back = 0;
  in >> back;
  CHECK(std::abs(back / tiny - 1) < 1e-18L);
  CHECK(long_double_string(INFINITY) == "inf");
}

TEST_CASE("CSV rows have the header's column count and 17 digits") {
  CertReport r;
  r.a1 = 0.1;
  r.beta = 1.0 / 3;
  r.a2 = 4 * r.beta * r.beta * r.a1;
  r.verdict = true;
  r.cpsd_margin = 1e-300L * 1e-300L;
  const std::string head = scan_csv_header(), row = scan_csv_row(r);
  auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(commas(head) == commas(row));
  CHECK(row.substr(0, 20) == "0.33333333333333331,");
  CHECK(row.find("1e-600") != std::string::npos);
  CHECK(row.substr(row.size() - 2) == "\r\n");
}

TEST_CASE("search result JSON") {
  SearchResult r;
  r.best_config = canonical_config(1.0, 2);
  r.best_value = 0.5;
  r.per_restart_values = {0.5, 0.7};
  r.iterations_used = {10, 20};
  r.converged = {true, false};
  const Json j = to_json(r);
  CHECK(j["best_value"].get<double>() == 0.5);
  CHECK(j["converged"][1].get<bool>() == false);
  CHECK(config_from_json(j["best_config"]).points() == r.best_config.points());
}

TEST_CASE("ledger entry JSON uses the parameter name") {
  BoundLedgerEntry e;
  e.name = "A.large.theta(0)";
  e.param_name = "a";
  e.param = 12;
  e.rhs = INFINITY;
  const Json j = to_json(e);
  CHECK(j["a"].get<double>() == 12);
  CHECK(!j.contains("beta"));
  CHECK(j["rhs"] == "inf");
}
