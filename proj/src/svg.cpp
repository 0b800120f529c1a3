#include "herdsig/svg.hpp"

#include <algorithm>

#include "herdsig/fileutil.hpp"

namespace herdsig::svg {

namespace {

std::string escape(const std::string& s) {
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

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string roc_plot(const std::vector<std::pair<double, double>>& pts, const std::string& title) {
  constexpr double size = 400, margin = 50;
  const auto px = [&](double x) { return margin + x * size; };
  const auto py = [&](double y) { return margin + (1.0 - y) * size; };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" font-family=\"sans-serif\">\n";
  s += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" + num(size) + "\" height=\"" + num(size) +
       "\" fill=\"none\" stroke=\"#333\"/>\n";
  s += "<line x1=\"" + num(px(0)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(1)) + "\" y2=\"" + num(py(1)) +
       "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  s += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(px(pts[i].first)) + ',' + num(py(pts[i].second));
  }
  s += "\"/>\n";
  s += "<text x=\"250\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) + "</text>\n";
  s += "<text x=\"250\" y=\"485\" text-anchor=\"middle\" font-size=\"12\">False positive rate</text>\n";
  s += "<text x=\"15\" y=\"250\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 250)\">True positive rate</text>\n";
  s += "</svg>\n";
  return s;
}

std::string bar_chart(const std::vector<std::pair<std::string, double>>& bars, const std::string& title) {
  constexpr double bar_h = 24, left = 160, width = 300, top = 50;
  double peak = 0.0;
  for (const auto& b : bars) peak = std::max(peak, b.second);
  if (peak <= 0.0) peak = 1.0;
  const double height = top + bars.size() * (bar_h + 8) + 20;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"" + num(height) +
                  "\" font-family=\"sans-serif\">\n";
  s += "<text x=\"260\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) + "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double y = top + static_cast<double>(i) * (bar_h + 8);
    const double w = std::max(0.0, bars[i].second) / peak * width;
    s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + bar_h * 0.7) + "\" text-anchor=\"end\" font-size=\"12\">" +
         escape(bars[i].first) + "</text>\n";
    s += "<rect x=\"" + num(left) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(bar_h) +
         "\" fill=\"#2e86c1\"/>\n";
    s += "<text x=\"" + num(left + w + 6) + "\" y=\"" + num(y + bar_h * 0.7) + "\" font-size=\"12\">" +
         format_g6(bars[i].second) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace herdsig::svg
