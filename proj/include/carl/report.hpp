#pragma once

#include <string>
#include <vector>

namespace carl {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws "missing column" when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric(const std::string& name) const;
};

/// Shortest decimal form that round-trips a double.
std::string format_number(double v);

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Linear map from data coordinates to the plot viewport, shared by writer and checker.
struct PlotFrame {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  static constexpr double kLeft = 80.0, kTop = 40.0, kWidth = 560.0, kHeight = 400.0;

  double px(double x) const;
  double py(double y) const;
  double data_x(double px) const;
  double data_y(double py) const;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with fixed viewport; an empty series list gives empty axes with "no data".
std::string line_plot_svg(const std::vector<Series>& series, const std::string& title);

/// Heatmap of values[iy * xs.size() + ix]; non-finite cells are drawn grey.
std::string heatmap_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& values, const std::string& title);

/// Polyline vertices of the first line-plot series, mapped back to data coordinates.
std::vector<std::pair<double, double>> extract_polyline(const std::string& svg);

/// Chooses the plot type from the CSV columns: (tau, lambda, ratio) gives a heatmap of the
/// per-cell minimum; (time, value) gives a line plot per series column; other layouts throw.
std::string emit_plot(const CsvTable& table, const std::string& title);

}  // namespace carl
