#include <cmath>
#include <limits>

#include "carl/report.hpp"
#include "doctest.h"

using namespace carl;

TEST_CASE("numbers round-trip through their shortest form") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("CSV round trip with quoting") {
  CsvTable t;
  t.header = {"name", "value"};
  t.rows = {{"plain", "1"}, {"has,comma", "2"}, {"has \"quote\"", "3"}, {"multi\nline", "4"}};
  const std::string text = to_csv(t);
  CHECK(text == to_csv(t));
  CHECK(text.find('\r') == std::string::npos);
  const CsvTable back = parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.numeric("value") == std::vector<double>{1, 2, 3, 4});
  CHECK_THROWS_WITH(back.column("missing"), doctest::Contains("missing column"));
}

TEST_CASE("plot frame maps are inverse to each other") {
  PlotFrame f{-1.0, 3.0, 10.0, 20.0};
  for (double x : {-1.0, 0.0, 2.5, 3.0}) CHECK(f.data_x(f.px(x)) == doctest::Approx(x).epsilon(1e-14));
  for (double y : {10.0, 12.0, 20.0}) CHECK(f.data_y(f.py(y)) == doctest::Approx(y).epsilon(1e-14));
  CHECK(f.py(20.0) < f.py(10.0));
}

TEST_CASE("line plot reproduces its data") {
  Series s{"energy", {}, {}};
  for (int k = 0; k <= 50; ++k) {
    s.x.push_back(0.04 * k);
    s.y.push_back(std::sin(0.04 * k) + 2.0);
  }
  const std::string svg = line_plot_svg({s}, "energy");
  CHECK(svg == line_plot_svg({s}, "energy"));
  const auto pts = extract_polyline(svg);
  REQUIRE(pts.size() == s.x.size());
  double dx = 0.0, dy = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    dx = std::max(dx, std::abs(pts[k].first - s.x[k]));
    dy = std::max(dy, std::abs(pts[k].second - s.y[k]));
  }
  const double span_x = 2.0, span_y = 1.0;
  CHECK(dx <= 1e-6 * span_x);
  CHECK(dy <= 1e-6 * span_y);
}

TEST_CASE("empty plot says so") {
  const std::string svg = line_plot_svg({}, "nothing");
  CHECK(svg.find("no data") != std::string::npos);
  CHECK(extract_polyline(svg).empty());
}

TEST_CASE("plot type follows the table layout") {
  CsvTable audit;
  audit.header = {"tau", "lambda", "member", "ratio"};
  audit.rows = {{"2", "1", "0", "5"}, {"2", "1", "1", "3"}, {"4", "1", "0", "inf"}, {"4", "2", "0", "7"}};
  const std::string hm = emit_plot(audit, "audit");
  CHECK(hm.find("<rect") != std::string::npos);
  CHECK(hm == emit_plot(audit, "audit"));

  CsvTable series;
  series.header = {"time", "value", "series"};
  series.rows = {{"0", "1", "a"}, {"1", "2", "a"}, {"0", "3", "b"}, {"1", "4", "b"}};
  const std::string lp = emit_plot(series, "traces");
  const auto pts = extract_polyline(lp);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].second == doctest::Approx(2.0).epsilon(1e-9));

  CsvTable other;
  other.header = {"a", "b"};
  other.rows = {{"1", "2"}};
  CHECK_THROWS_WITH(emit_plot(other, "x"), doctest::Contains("missing columns"));
}

TEST_CASE("heatmap draws non-finite cells grey") {
  const std::string svg = heatmap_svg({1, 2}, {1}, {1.0, std::numeric_limits<double>::infinity()}, "h");
  CHECK(svg.find("#bbbbbb") != std::string::npos);
}
