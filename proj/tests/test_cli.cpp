#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "fraclap/cli.hpp"
#include "fraclap/constants.hpp"

using namespace fraclap;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fraclap");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1e-4) == "1e-04");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-2.5e-7).find('e') != std::string::npos);
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("report writers carry routes") {
  ReportRecord r;
  r.add("x", 1.5, 0.01, "route:a");
  r.check("ok", true, "route:b");
  r.check("bad", false, "route:c");
  CHECK(!r.passed());
  CHECK(r.find("x")->route == "route:a");
  std::ostringstream csv, json;
  write_csv(r, csv);
  write_json(r, json);
  CHECK(csv.str().rfind("name,value,err,route\nx,1.5,0.01,route:a\n", 0) == 0);
  const auto j = nlohmann::json::parse(json.str());
  CHECK(j["x"]["value"].get<double>() == 1.5);
  CHECK(j["bad"]["route"] == "route:c");
}

TEST_CASE("usage errors") {
  CHECK(run({"constants", "--s", "1.5"}).code == cli::kUsage);
  CHECK(run({"constants", "--d", "1"}).code == cli::kUsage);
  CHECK(run({"convert", "--a", "1", "--b", "1"}).code == cli::kUsage);
  CHECK(run({"nonsense"}).code == cli::kUsage);
  CHECK(run({"constants", "--volume", "1"}).code == cli::kUsage);
  CHECK(run({"verify-square", "--points", "80"}).code == cli::kUsage);
  CHECK(run({"constants", "--format", "xml"}).code == cli::kUsage);
}

TEST_CASE("convert") {
  const auto r = run({"convert", "--A", "1", "--B", "0", "--a", "1", "--b", "0", "--format", "json"});
  CHECK(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["C"]["value"].get<double>() == doctest::Approx(0.25));
  CHECK(j["D"]["value"].get<double>() == 0.0);
  CHECK(j["A_roundtrip"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constants in CSV and JSON carry the same numbers") {
  const auto csv = run({"constants", "--s", "0.5", "--d", "3", "--volume", "1", "--surface", "6"});
  const auto json = run({"constants", "--s", "0.5", "--d", "3", "--volume", "1", "--surface", "6", "--format", "json"});
  REQUIRE(csv.code == cli::kOk);
  REQUIRE(json.code == cli::kOk);
  const auto j = nlohmann::json::parse(json.out);
  auto lines = split(csv.out, '\n');
  REQUIRE(lines.size() > 5);
  CHECK(lines[0] == "name,value,err,route");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split(lines[k], ',');
    REQUIRE(f.size() >= 4);
    CHECK(std::stod(f[1]) == j[f[0]]["value"].get<double>());
    CHECK(f[3] == j[f[0]]["route"].get<std::string>());
  }
  CHECK(j["L1"]["value"].get<double>() == doctest::Approx(L1(FractionalOrder(0.5, 3))).epsilon(1e-14));
  CHECK(j["L2_positive"]["value"].get<double>() == 1.0);
  CHECK(j.contains("C1"));
  CHECK(j["L2"]["route"] == "L2:K_integral");
}

TEST_CASE("layer table ends on the boundary constant") {
  const auto r = run({"layer", "--s", "0.5", "--d", "3", "--points", "6"});
  REQUIRE(r.code == cli::kOk);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "t,K,cumulative");
  double prev = 0.0;
  for (std::size_t k = 1; k + 1 < lines.size(); ++k) {
    const double t = std::stod(split(lines[k], ',')[0]);
    CHECK(t > prev);
    prev = t;
  }
  const auto last = split(lines.back(), ',');
  CHECK(last[0] == "inf");
  CHECK(std::stod(last[2]) == doctest::Approx(L2_via_K(FractionalOrder(0.5, 3)).value).epsilon(1e-10));
}

TEST_CASE("verify-square is deterministic") {
  const std::vector<std::string> args{"verify-square", "--points", "24", "--h-list", "0.2,0.3,0.45,0.6,0.8",
                                      "--format", "json"};
  const auto a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK((a.code == cli::kOk || a.code == cli::kAssertion));
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["c0"]["route"] == "lattice:two_term_fit");
}

TEST_CASE("order-check and convert exit codes") {
  CHECK(run({"order-check", "--s", "0.5", "--points", "32"}).code == cli::kOk);
  CHECK(run({"order-check", "--shape", "square", "--s", "0.25", "--points", "10"}).code == cli::kOk);
}
