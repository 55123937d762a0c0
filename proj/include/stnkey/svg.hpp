#pragma once

#include <string>
#include <utility>
#include <vector>

namespace stnkey {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;  ///< plot log10(x); non-positive x dropped
  bool log_y = false;
  int width = 720;
  int height = 480;
};

/// Renders an SVG line plot. Output is a pure function of the inputs; points
/// dropped by a log axis split their polyline into segments.
std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace stnkey
