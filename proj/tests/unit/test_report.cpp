#include <cmath>
#include <limits>
#include <stdexcept>

#include <doctest.h>
#include <json.hpp>

#include "gml/errors.hpp"
#include "gml/report.hpp"

using namespace gml;

namespace {

Report sample() {
  Report r;
  r.command = "means";
  r.params = {{"p", 2.0}, {"coeffs", std::string("1,1")}};
  auto& t = r.add_table("means", {"r", "value", "flag"});
  t.add_row({1.0, 1.0 / 3.0, true});
  t.add_row({std::int64_t{2}, std::monostate{}, std::string("a,\"b\"")});
  r.summary = {{"upper", std::numeric_limits<double>::infinity()}, {"n", std::int64_t{2}}};
  r.notes = {"first note"};
  return r;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::sqrt(2.0) * 1e20) == "1.41421356237e+20");
  CHECK(format_number(2.5) == "2.5");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("output formats") {
  CHECK(parse_output_format("table") == OutputFormat::kTable);
  CHECK(parse_output_format("csv") == OutputFormat::kCsv);
  CHECK(parse_output_format("json") == OutputFormat::kJson);
  CHECK_THROWS_AS(parse_output_format("xml"), DomainError);
}

TEST_CASE("table rows must match the columns") {
  Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
  t.add_row({1.0, 2.0});
  CHECK(t.rows.size() == 1);
}

TEST_CASE("csv rendering") {
  const std::string csv = render_csv(sample());
  CHECK(csv.find("# means\nr,value,flag\n1,0.333333333333,true\n2,,\"a,\"\"b\"\"\"\n") !=
        std::string::npos);
  CHECK(csv.find("# summary\nkey,value\nupper,inf\nn,2\n") != std::string::npos);
}

TEST_CASE("json rendering") {
  const auto j = nlohmann::json::parse(render_json(sample()));
  CHECK(j["command"] == "means");
  CHECK(j["params"]["coeffs"] == "1,1");
  CHECK(j["tables"][0]["name"] == "means");
  CHECK(j["tables"][0]["rows"][0][1].get<double>() == 0.333333333333);
  CHECK(j["tables"][0]["rows"][0][2] == true);
  CHECK(j["tables"][0]["rows"][1][1].is_null());
  CHECK(j["summary"]["upper"] == "inf");
  CHECK(j["summary"]["n"] == 2);
  CHECK(j["notes"][0] == "first note");
  // Insertion order is kept.
  const std::string text = render_json(sample());
  CHECK(text.find("\"p\"") < text.find("\"coeffs\""));
  CHECK(text == render_json(sample()));
}

TEST_CASE("table rendering") {
  const std::string text = render(sample(), OutputFormat::kTable);
  CHECK(text.find("0.333333333333") != std::string::npos);
  CHECK(text.find(" - ") != std::string::npos);
  CHECK(text.find("first note") != std::string::npos);
}
