#include "affred/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace affred::svg {

namespace {

constexpr double kPanelSize = 480.0;
constexpr double kMargin = 40.0;
constexpr double kLegendLine = 16.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render(const std::vector<Panel>& panels, const std::vector<std::string>& legend) {
  const double width = std::max<std::size_t>(panels.size(), 1) * kPanelSize;
  const double height = kPanelSize + kLegendLine * (static_cast<double>(legend.size()) + 1.0);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t k = 0; k < panels.size(); ++k) {
    const Panel& panel = panels[k];
    const double left = static_cast<double>(k) * kPanelSize;
    const double cx = left + kPanelSize / 2.0;
    const double cy = kPanelSize / 2.0;

    double extent = 0.0;
    for (const auto& p : panel.points) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    for (double r : panel.rings) extent = std::max(extent, r);
    if (extent <= 0.0) extent = 1.0;
    const double scale = (kPanelSize / 2.0 - kMargin) / extent;
    auto sx = [&](double x) { return cx + scale * x; };
    auto sy = [&](double y) { return cy - scale * y; };

    out << "<g class=\"panel\" id=\"panel" << k + 1 << "\">\n"
        << "<rect x=\"" << num(left + 4) << "\" y=\"4\" width=\"" << num(kPanelSize - 8)
        << "\" height=\"" << num(kPanelSize - 8) << "\" fill=\"none\" stroke=\"#ccc\"/>\n"
        << "<text class=\"title\" x=\"" << num(cx) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-size=\"13\">" << escape(panel.title) << "</text>\n";

    if (panel.number_line) {
      out << "<line x1=\"" << num(left + kMargin / 2) << "\" y1=\"" << num(cy) << "\" x2=\""
          << num(left + kPanelSize - kMargin / 2) << "\" y2=\"" << num(cy)
          << "\" stroke=\"#888\"/>\n";
    } else {
      out << "<line x1=\"" << num(left + kMargin / 2) << "\" y1=\"" << num(cy) << "\" x2=\""
          << num(left + kPanelSize - kMargin / 2) << "\" y2=\"" << num(cy)
          << "\" stroke=\"#eee\"/>\n"
          << "<line x1=\"" << num(cx) << "\" y1=\"" << num(kMargin / 2) << "\" x2=\"" << num(cx)
          << "\" y2=\"" << num(kPanelSize - kMargin / 2) << "\" stroke=\"#eee\"/>\n";
    }
    for (double r : panel.rings) {
      out << "<circle class=\"ring\" cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\""
          << num(scale * r) << "\" fill=\"none\" stroke=\"#9ab\" stroke-dasharray=\"4 3\"/>\n";
    }
    if (panel.origin_marker) {
      out << "<g class=\"origin\"><line x1=\"" << num(cx - 6) << "\" y1=\"" << num(cy)
          << "\" x2=\"" << num(cx + 6) << "\" y2=\"" << num(cy) << "\" stroke=\"black\"/>"
          << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy - 6) << "\" x2=\"" << num(cx)
          << "\" y2=\"" << num(cy + 6) << "\" stroke=\"black\"/></g>\n";
    }
    const double arrow_len = 0.85 * extent;
    for (const auto& a : panel.arrows) {
      const double x2 = sx(arrow_len * a.dx);
      const double y2 = sy(arrow_len * a.dy);
      out << "<g class=\"arrow\"><line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\""
          << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"#c33\"/>"
          << "<text x=\"" << num(x2) << "\" y=\"" << num(y2) << "\" fill=\"#c33\">"
          << escape(a.label) << "</text></g>\n";
    }
    for (const auto& p : panel.points) {
      const double radius = 3.0 * std::sqrt(std::max(p.area, 0.05));
      out << "<g class=\"point\"><circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y))
          << "\" r=\"" << num(radius) << "\" fill=\"#357\" fill-opacity=\"0.7\"/>"
          << "<text x=\"" << num(sx(p.x) + radius + 2) << "\" y=\"" << num(sy(p.y) - 2)
          << "\">" << escape(p.label) << "</text></g>\n";
    }
    out << "</g>\n";
  }

  double y = kPanelSize + kLegendLine;
  out << "<g class=\"legend\">\n";
  for (const auto& line : legend) {
    out << "<text x=\"10\" y=\"" << num(y) << "\">" << escape(line) << "</text>\n";
    y += kLegendLine;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace affred::svg
