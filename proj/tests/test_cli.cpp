#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logforms/cli.hpp"

using namespace logforms;
using namespace logforms::cli;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> argv(std::initializer_list<std::string> rest) {
  std::vector<std::string> out{"logforms"};
  out.insert(out.end(), rest);
  return out;
}

RunResult run_args(std::initializer_list<std::string> rest) { return run(parse_args(argv(rest))); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      row.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string json_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

TEST_CASE("parse_args examples") {
  auto c = parse_args(argv({"census", "-n", "2", "-A", "50,60", "-B", "4,5"}));
  CHECK(c.command == Command::census);
  CHECK(*c.bounds == Bounds::make({50, 60}, {4, 5}));
  CHECK(c.format == Format::json);
  CHECK(c.budget == kDefaultBudget);

  c = parse_args(argv({"verify-theorem", "-A", "8,12", "-B", "3,5", "--format", "json"}));
  CHECK(c.command == Command::verify_theorem);
  REQUIRE(c.param.has_value());
  CHECK(c.param->C == doctest::Approx(std::log(8.0)));

  c = parse_args(argv({"e-set", "-A", "100,100", "-B", "9,9", "--C", "3"}));
  CHECK(c.param->C == 3.0);
  CHECK(c.param->coeff_bound == 2);

  c = parse_args(argv({"converge", "--shape", "separated", "-n", "2", "--scales", "3,4,5", "--threads", "2"}));
  CHECK(c.shape == Shape::separated);
  CHECK(c.scales == std::vector<std::int64_t>{3, 4, 5});
  CHECK(c.threads == 2);
  CHECK_FALSE(c.bounds.has_value());
}

TEST_CASE("parse_args errors") {
  CHECK_THROWS_AS(parse_args(argv({"lemmas", "-A", "7,100", "-B", "9,9"})), ConfigError);
  CHECK_THROWS_AS(parse_args(argv({"census", "-A", "5,x", "-B", "1,1"})), UsageError);
  CHECK_THROWS_AS(parse_args(argv({"census", "-n", "3", "-A", "5,5", "-B", "1,1"})), UsageError);
  CHECK_THROWS_AS(parse_args(argv({"census", "-A", "5,5"})), UsageError);
  CHECK_THROWS_AS(parse_args(argv({"census", "-A", "5", "-B", "1", "--bogus"})), UsageError);
  CHECK_THROWS_AS(parse_args(argv({"frobnicate"})), UsageError);
  CHECK_THROWS_AS(parse_args(argv({"e-set", "-A", "50", "-B", "1", "--C", "1.5"})), ConfigError);
  CHECK_THROWS_AS(parse_args(argv({"census", "-A", "5", "-B", "1", "--budget", "0"})), UsageError);
  CHECK_THROWS_AS(parse_args(argv({"converge", "--shape", "equal", "-n", "1"})), UsageError);
}

TEST_CASE("census report") {
  const auto r = run_args({"census", "-A", "2,2", "-B", "1,1"});
  CHECK(r.exit_code == 0);
  const auto j = Json::parse(r.report);
  CHECK(j["config"]["command"] == "census");
  CHECK(j["results"]["exact_R"] == 5);
  CHECK(j["results"]["tuple_space"] == 36);
  CHECK(j.contains("metadata"));
  CHECK(j["metadata"]["version"] == kVersion);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"config", "results", "metadata"});
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  CHECK(main_entry(argv({"verify-theorem", "-A", "50,60", "-B", "4,5"}), out, err) == 0);
  const auto j = Json::parse(out.str());
  CHECK(j["results"]["violations"].empty());
  CHECK(j["config"]["coeff_bound"] == 2);

  out.str("");
  CHECK(main_entry(argv({"census", "-A", "100,100", "-B", "9,9", "--budget", "10"}), out, err) == 2);
  CHECK(main_entry(argv({"census", "--nope"}), out, err) == 2);
  CHECK(main_entry(argv({"converge", "-n", "2", "--scales", "4,8,16", "--budget", "5000"}), out, err) == 2);
}

TEST_CASE("identical configs give identical config and results") {
  for (auto cmd : {"census", "e-set", "lemmas", "asymptotic", "verify-theorem"}) {
    const auto a = Json::parse(run_args({cmd, "-A", "30,40", "-B", "3,4"}).report);
    const auto b = Json::parse(run_args({cmd, "-A", "30,40", "-B", "3,4"}).report);
    CHECK(a["config"].dump() == b["config"].dump());
    CHECK(a["results"].dump() == b["results"].dump());
  }
}

TEST_CASE("CSV and JSON carry the same numbers") {
  struct Case {
    std::vector<std::string> args;
    std::vector<std::string> columns;
  };
  const std::vector<Case> cases{
      {{"census", "-A", "30,40", "-B", "3,4"}, {"tuple_space", "exact_R", "formula", "formula_value", "ratio", "e_count"}},
      {{"e-set", "-A", "30,40", "-B", "3,4"}, {"e_count", "density", "tuple_space"}},
      {{"verify-theorem", "-A", "30,40", "-B", "3,4"}, {"e_count", "distinct_values", "shared_values"}},
      {{"asymptotic", "-A", "30,40", "-B", "3,4"}, {"proposition_value", "corollary1_value", "corollary2_value", "two_factor_value"}},
  };
  for (const auto& cs : cases) {
    auto args = argv({});
    args.insert(args.end(), cs.args.begin(), cs.args.end());
    const auto json = Json::parse(run(parse_args(args)).report);
    args.insert(args.end(), {"--format", "csv"});
    const auto rows = csv_rows(run(parse_args(args)).report);
    REQUIRE(rows.size() == 2);
    for (const auto& col : cs.columns) {
      const auto it = std::find(rows[0].begin(), rows[0].end(), col);
      REQUIRE(it != rows[0].end());
      CHECK(rows[1][it - rows[0].begin()] == json_field(json["results"][col]));
    }
  }

  auto args = argv({"lemmas", "-A", "300,400", "-B", "20,30", "--C", "5"});
  const auto json = Json::parse(run(parse_args(args)).report);
  args.insert(args.end(), {"--format", "csv"});
  const auto rows = csv_rows(run(parse_args(args)).report);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"lemma", "n", "A", "B", "C", "exact_count", "bound_value", "ratio"});
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& rec = json["results"]["lemmas"][k];
    CHECK(rows[k + 1][5] == json_field(rec["exact_count"]));
    CHECK(rows[k + 1][6] == json_field(rec["bound_value"]));
    CHECK(rows[k + 1][7] == json_field(rec["ratio"]));
  }
}

TEST_CASE("converge CSV has one row per scale") {
  const auto r = run_args({"converge", "-n", "1", "--scales", "10,20,40", "--format", "csv"});
  CHECK(r.exit_code == 0);
  const auto rows = csv_rows(r.report);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "scale");
  CHECK(rows[1][0] == "10");
  CHECK(rows[3][2] == "40");
  double last = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double ratio = std::stod(rows[k][8]);
    CHECK(ratio > last);
    last = ratio;
  }
}

TEST_CASE("--out writes the report to a file") {
  const std::string path = "logforms_cli_test_out.json";
  std::ostringstream out, err;
  CHECK(main_entry(argv({"asymptotic", "-A", "5,7", "-B", "2,3", "--out", path}), out, err) == 0);
  CHECK(out.str().empty());
  std::ifstream in(path);
  const auto j = Json::parse(in);
  CHECK(j["results"].contains("proposition_exact"));
  std::remove(path.c_str());
}

TEST_CASE("format_number") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(NAN) == "");
  CHECK(format_number(INFINITY) == "");
}
