#pragma once

#include <string>
#include <vector>

namespace affred::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
  std::string label;
  /// Relative marker area; 1 is the default size.
  double area = 1.0;
};

struct Arrow {
  double dx = 0.0;
  double dy = 0.0;
  std::string label;
};

struct Panel {
  std::string title;
  std::vector<Point> points;
  /// Unit directions, drawn scaled to the panel's extent.
  std::vector<Arrow> arrows;
  bool origin_marker = false;
  /// Circles at these radii, centred on the origin.
  std::vector<double> rings;
  /// Points live on a horizontal number line (q = 1).
  bool number_line = false;
};

/// Self-contained SVG document with the panels laid out left to right and the
/// legend lines printed underneath.
std::string render(const std::vector<Panel>& panels, const std::vector<std::string>& legend);

std::string escape(const std::string& text);

}  // namespace affred::svg
