#include "carl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace carl {

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::invalid_argument("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  for (const auto& r : rows) {
    if (c >= r.size()) throw std::invalid_argument("short row in column '" + name + "'");
    out.push_back(r[c] == "inf" ? std::numeric_limits<double>::infinity()
                  : r[c] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                  : std::stod(r[c]));
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : cells[i]) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      } else {
        out += cells[i];
      }
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cur;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = any = true;
    } else if (ch == ',') {
      cur.push_back(cell);
      cell.clear();
      any = true;
    } else if (ch == '\n') {
      cur.push_back(cell);
      lines.push_back(cur);
      cur.clear();
      cell.clear();
      any = false;
    } else if (ch != '\r') {
      cell += ch;
      any = true;
    }
  }
  if (any) {
    cur.push_back(cell);
    lines.push_back(cur);
  }
  if (!lines.empty()) {
    t.header = lines.front();
    t.rows.assign(lines.begin() + 1, lines.end());
  }
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

double PlotFrame::px(double x) const { return kLeft + (x - x0) / (x1 - x0) * kWidth; }
double PlotFrame::py(double y) const { return kTop + kHeight - (y - y0) / (y1 - y0) * kHeight; }
double PlotFrame::data_x(double p) const { return x0 + (p - kLeft) / kWidth * (x1 - x0); }
double PlotFrame::data_y(double p) const { return y0 + (kTop + kHeight - p) / kHeight * (y1 - y0); }

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string header_svg(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"500\" viewBox=\"0 0 720 500\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"500\" fill=\"white\"/>\n"
     << "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title)
     << "</text>\n"
     << "<rect x=\"" << PlotFrame::kLeft << "\" y=\"" << PlotFrame::kTop << "\" width=\"" << PlotFrame::kWidth
     << "\" height=\"" << PlotFrame::kHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
  return os.str();
}

std::string axis_labels(const PlotFrame& f) {
  std::ostringstream os;
  auto lab = [&](double x, double y, const char* anchor, double v) {
    os << "<text x=\"" << format_number(x) << "\" y=\"" << format_number(y) << "\" text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_number(v) << "</text>\n";
  };
  lab(PlotFrame::kLeft, PlotFrame::kTop + PlotFrame::kHeight + 16, "start", f.x0);
  lab(PlotFrame::kLeft + PlotFrame::kWidth, PlotFrame::kTop + PlotFrame::kHeight + 16, "end", f.x1);
  lab(PlotFrame::kLeft - 6, PlotFrame::kTop + PlotFrame::kHeight, "end", f.y0);
  lab(PlotFrame::kLeft - 6, PlotFrame::kTop + 10, "end", f.y1);
  return os.str();
}

std::string no_data() {
  return "<text x=\"360\" y=\"250\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">no data</text>\n";
}

std::string ramp(double s) {
  // Fixed blue-to-yellow ramp.
  s = std::clamp(s, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(68 + s * (253 - 68)));
  const int g = static_cast<int>(std::lround(1 + s * (231 - 1)));
  const int b = static_cast<int>(std::lround(84 + s * (37 - 84)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string line_plot_svg(const std::vector<Series>& series, const std::string& title) {
  std::string out = header_svg(title);
  PlotFrame f;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) return out + no_data() + "</svg>\n";
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  f.x0 = xmin;
  f.x1 = xmax;
  f.y0 = ymin;
  f.y1 = ymax;
  out += axis_labels(f);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += format_number(f.px(s.x[i])) + "," + format_number(f.py(s.y[i]));
    }
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
    out += "<text x=\"650\" y=\"" + format_number(60.0 + 16.0 * k) + "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
           color + "\">" + escape(s.name) + "</text>\n";
  }
  // Data range as metadata so the point map can be inverted exactly.
  out += "<desc>frame " + format_number(f.x0) + " " + format_number(f.x1) + " " + format_number(f.y0) + " " +
         format_number(f.y1) + "</desc>\n";
  return out + "</svg>\n";
}

std::string heatmap_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& values, const std::string& title) {
  std::string out = header_svg(title);
  if (xs.empty() || ys.empty() || values.size() != xs.size() * ys.size()) return out + no_data() + "</svg>\n";
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const double cw = PlotFrame::kWidth / xs.size(), ch = PlotFrame::kHeight / ys.size();
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double v = values[iy * xs.size() + ix];
      const double s = std::isfinite(v) && vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.5;
      const std::string color = std::isfinite(v) ? ramp(s) : "#bbbbbb";
      const double x = PlotFrame::kLeft + ix * cw;
      const double y = PlotFrame::kTop + PlotFrame::kHeight - (iy + 1) * ch;
      out += "<rect x=\"" + format_number(x) + "\" y=\"" + format_number(y) + "\" width=\"" + format_number(cw) +
             "\" height=\"" + format_number(ch) + "\" fill=\"" + color + "\"><title>" + format_number(xs[ix]) + "," +
             format_number(ys[iy]) + ":" + format_number(v) + "</title></rect>\n";
      out += "<text x=\"" + format_number(x + 0.5 * cw) + "\" y=\"" + format_number(y + 0.5 * ch) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + format_number(v) + "</text>\n";
    }
  }
  for (std::size_t ix = 0; ix < xs.size(); ++ix) {
    out += "<text x=\"" + format_number(PlotFrame::kLeft + (ix + 0.5) * cw) + "\" y=\"" +
           format_number(PlotFrame::kTop + PlotFrame::kHeight + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + format_number(xs[ix]) + "</text>\n";
  }
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    out += "<text x=\"" + format_number(PlotFrame::kLeft - 6) + "\" y=\"" +
           format_number(PlotFrame::kTop + PlotFrame::kHeight - (iy + 0.5) * ch) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + format_number(ys[iy]) + "</text>\n";
  }
  return out + "</svg>\n";
}

std::vector<std::pair<double, double>> extract_polyline(const std::string& svg) {
  std::vector<std::pair<double, double>> out;
  const auto d = svg.find("<desc>frame ");
  const auto p = svg.find("points=\"");
  if (d == std::string::npos || p == std::string::npos) return out;
  PlotFrame f;
  std::istringstream fs(svg.substr(d + 12));
  fs >> f.x0 >> f.x1 >> f.y0 >> f.y1;
  const auto end = svg.find('"', p + 8);
  std::istringstream ps(svg.substr(p + 8, end - p - 8));
  std::string tok;
  while (ps >> tok) {
    const auto comma = tok.find(',');
    out.emplace_back(f.data_x(std::stod(tok.substr(0, comma))), f.data_y(std::stod(tok.substr(comma + 1))));
  }
  return out;
}

std::string emit_plot(const CsvTable& table, const std::string& title) {
  const auto has = [&](const char* c) {
    return std::find(table.header.begin(), table.header.end(), c) != table.header.end();
  };
  if (has("tau") && has("lambda") && has("ratio")) {
    const auto tau = table.numeric("tau"), lam = table.numeric("lambda"), r = table.numeric("ratio");
    std::vector<double> xs(tau), ys(lam);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    std::vector<double> v(xs.size() * ys.size(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < r.size(); ++k) {
      const auto ix = std::lower_bound(xs.begin(), xs.end(), tau[k]) - xs.begin();
      const auto iy = std::lower_bound(ys.begin(), ys.end(), lam[k]) - ys.begin();
      double& cell = v[iy * xs.size() + ix];
      if (!std::isinf(r[k])) cell = std::isinf(cell) ? r[k] : std::min(cell, r[k]);
    }
    return heatmap_svg(xs, ys, v, title);
  }
  if (has("time") && has("value")) {
    const auto t = table.numeric("time"), val = table.numeric("value");
    // Group by the series column when present, keeping first-appearance order.
    std::vector<std::string> keys;
    std::map<std::string, Series> groups;
    const bool grouped = has("series");
    const std::size_t sc = grouped ? table.column("series") : 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::string key = grouped ? table.rows[k][sc] : "value";
      if (!groups.count(key)) {
        keys.push_back(key);
        groups[key].name = key;
      }
      groups[key].x.push_back(t[k]);
      groups[key].y.push_back(val[k]);
    }
    std::vector<Series> s;
    for (const auto& k : keys) s.push_back(groups[k]);
    return line_plot_svg(s, title);
  }
  if (table.header.empty()) return line_plot_svg({}, title);
  throw std::invalid_argument("missing columns: expected (tau, lambda, ratio) or (time, value)");
}

}  // namespace carl
