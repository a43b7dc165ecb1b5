#include "histat/chart.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace histat::corpus {

namespace {

constexpr int kWidth = 960, kHeight = 420;
constexpr int kMarginLeft = 64, kMarginRight = 24, kMarginTop = 24, kMarginBottom = 48;
constexpr int kPlotW = kWidth - kMarginLeft - kMarginRight;
constexpr int kPlotH = kHeight - kMarginTop - kMarginBottom;

const char* kPalette[6] = {"#1b6ca8", "#b3383e", "#3d8c40", "#8a5fa0", "#c77d2e", "#4f4f4f"};

// Fixed two-decimal formatting keeps the output locale-free and stable.
std::string px(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_chart(const std::vector<AnnualSeries>& series,
                         const std::vector<int>& significant_years) {
  if (series.empty()) throw DomainError("render_chart: needs at least one series");

  int year_min = series[0].years.front().year, year_max = series[0].years.back().year;
  double prop_max = 0.0;
  for (const auto& s : series) {
    year_min = std::min(year_min, s.years.front().year);
    year_max = std::max(year_max, s.years.back().year);
    for (const auto& y : s.years)
      if (y.defined) prop_max = std::max(prop_max, y.proportion);
  }
  // Round the proportion axis up to a tidy step.
  double y_top = std::ceil(std::max(prop_max, 1e-9) * 20.0) / 20.0;

  const double x_span = std::max(1, year_max - year_min);
  auto x_of = [&](double year) { return kMarginLeft + (year - year_min) / x_span * kPlotW; };
  auto y_of = [&](double p) { return kMarginTop + (1.0 - p / y_top) * kPlotH; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) +
         " " + std::to_string(kHeight) + "\">\n";
  svg += "<rect width=\"" + std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
         "\" fill=\"white\"/>\n";

  // axes
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + px(kMarginLeft) + "\" y1=\"" + px(kMarginTop) + "\" x2=\"" +
         px(kMarginLeft) + "\" y2=\"" + px(kMarginTop + kPlotH) + "\"/>\n";
  svg += "<line x1=\"" + px(kMarginLeft) + "\" y1=\"" + px(kMarginTop + kPlotH) + "\" x2=\"" +
         px(kMarginLeft + kPlotW) + "\" y2=\"" + px(kMarginTop + kPlotH) + "\"/>\n";
  svg += "</g>\n";

  // year ticks at multiples of five
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int y = year_min - year_min % 5 + (year_min % 5 ? 5 : 0); y <= year_max; y += 5) {
    const double x = x_of(y);
    svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(kMarginTop + kPlotH) + "\" x2=\"" + px(x) +
           "\" y2=\"" + px(kMarginTop + kPlotH + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + px(x) + "\" y=\"" + px(kMarginTop + kPlotH + 18) +
           "\" text-anchor=\"middle\">" + std::to_string(y) + "</text>\n";
  }
  // proportion ticks: five equal divisions
  for (int i = 0; i <= 5; ++i) {
    const double p = y_top * i / 5.0;
    const double yy = y_of(p);
    svg += "<line x1=\"" + px(kMarginLeft - 5) + "\" y1=\"" + px(yy) + "\" x2=\"" +
           px(kMarginLeft) + "\" y2=\"" + px(yy) + "\" stroke=\"black\"/>\n";
    char pbuf[32];
    auto res = std::to_chars(pbuf, pbuf + sizeof(pbuf), p, std::chars_format::fixed, 3);
    svg += "<text x=\"" + px(kMarginLeft - 8) + "\" y=\"" + px(yy + 4) +
           "\" text-anchor=\"end\">" + std::string(pbuf, res.ptr) + "</text>\n";
  }
  svg += "</g>\n";

  // vertical dashed markers at significant years
  std::set<int> markers(significant_years.begin(), significant_years.end());
  for (int y : markers) {
    if (y < year_min || y > year_max) continue;
    svg += "<line x1=\"" + px(x_of(y)) + "\" y1=\"" + px(kMarginTop) + "\" x2=\"" + px(x_of(y)) +
           "\" y2=\"" + px(kMarginTop + kPlotH) +
           "\" stroke=\"#555555\" stroke-dasharray=\"4,3\" stroke-width=\"1\"/>\n";
  }

  // one polyline per contiguous run of defined years
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % 6];
    std::string points;
    auto flush = [&]() {
      if (points.empty()) return;
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (const auto& y : series[si].years) {
      if (!y.defined) {
        flush();  // zero-issue years render as gaps
        continue;
      }
      if (!points.empty()) points += " ";
      points += px(x_of(y.year)) + "," + px(y_of(y.proportion));
    }
    flush();
  }

  // legend
  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double ly = kMarginTop + 8 + 18.0 * si;
    svg += "<line x1=\"" + px(kMarginLeft + 10) + "\" y1=\"" + px(ly) + "\" x2=\"" +
           px(kMarginLeft + 34) + "\" y2=\"" + px(ly) + "\" stroke=\"" + kPalette[si % 6] +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + px(kMarginLeft + 40) + "\" y=\"" + px(ly + 4) + "\">" +
           escape_xml(series[si].pattern) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void emit_chart(const std::vector<AnnualSeries>& series, const std::vector<int>& significant_years,
                const std::filesystem::path& output) {
  const std::string svg = render_chart(series, significant_years);
  std::ofstream out(output, std::ios::binary);
  if (!out) throw DataError("cannot write chart to " + output.string());
  out << svg;
  if (!out) throw DataError("failed while writing chart to " + output.string());
}

}  // namespace histat::corpus
