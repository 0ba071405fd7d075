#include "adbench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace adbench::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kTop = 50.0;
constexpr double kPlotHeight = 260.0;
constexpr double kBarPitch = 30.0;
constexpr double kBarWidth = 20.0;
constexpr double kBottom = 130.0;

const char* const kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

std::string bar_chart(const std::vector<Bar>& bars, const ChartOptions& options) {
  double lo = options.lo;
  double hi = options.hi;
  if (!(lo < hi)) {
    lo = 0.0;
    hi = 0.0;
    for (const auto& b : bars) {
      if (!std::isfinite(b.value)) continue;
      lo = std::min(lo, b.value - b.error);
      hi = std::max(hi, b.value + b.error);
    }
    if (hi <= lo) hi = lo + 1.0;
  }
  const auto y_of = [&](double v) { return kTop + kPlotHeight * (hi - std::clamp(v, lo, hi)) / (hi - lo); };

  std::vector<std::string> groups;
  for (const auto& b : bars) {
    if (!b.group.empty() && std::find(groups.begin(), groups.end(), b.group) == groups.end()) groups.push_back(b.group);
  }
  const auto colour_of = [&](const std::string& g) {
    const auto it = std::find(groups.begin(), groups.end(), g);
    const auto i = it == groups.end() ? 0 : static_cast<std::size_t>(it - groups.begin());
    return kPalette[i % std::size(kPalette)];
  };

  const double width = std::max(420.0, kLeft + kBarPitch * static_cast<double>(bars.size()) + 40.0);
  const double height = kTop + kPlotHeight + kBottom;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(options.title) << "</text>\n";
  out << "<text transform=\"translate(16," << num(kTop + kPlotHeight / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(options.y_label) << "</text>\n";

  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = y_of(v);
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(width - 20) << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(v)
        << "</text>\n";
  }
  const double zero = y_of(0.0);
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(zero) << "\" x2=\"" << num(width - 20) << "\" y2=\""
      << num(zero) << "\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double x = kLeft + 10.0 + kBarPitch * static_cast<double>(i);
    const double v = std::isfinite(b.value) ? b.value : 0.0;
    const double top = std::min(y_of(v), zero);
    const double h = std::abs(y_of(v) - zero);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(top) << "\" width=\"" << num(kBarWidth) << "\" height=\""
        << num(h) << "\" fill=\"" << colour_of(b.group) << "\"><title>" << escape(b.label) << ": " << num(b.value)
        << "</title></rect>\n";
    if (b.error > 0.0) {
      const double cx = x + kBarWidth / 2;
      out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y_of(v - b.error)) << "\" x2=\"" << num(cx) << "\" y2=\""
          << num(y_of(v + b.error)) << "\" stroke=\"black\"/>\n";
    }
    const double lx = x + kBarWidth / 2;
    const double ly = kTop + kPlotHeight + 12;
    out << "<text transform=\"translate(" << num(lx) << "," << num(ly) << ") rotate(-60)\" text-anchor=\"end\">"
        << escape(b.label) << "</text>\n";
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double y = kTop + 14.0 * static_cast<double>(g);
    out << "<rect x=\"" << num(width - 140) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << kPalette[g % std::size(kPalette)] << "\"/>\n";
    out << "<text x=\"" << num(width - 126) << "\" y=\"" << num(y) << "\">" << escape(groups[g]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace adbench::svg
