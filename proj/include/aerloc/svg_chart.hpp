#ifndef AERLOC_SVG_CHART_HPP_
#define AERLOC_SVG_CHART_HPP_

#include <string>
#include <utility>
#include <vector>

namespace aerloc {

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), drawn in order
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  int width = 720;
  int height = 440;
};

/// Self-contained SVG document with axes, ticks, polylines and a legend.
std::string render_svg(const LineChart& chart);

}  // namespace aerloc

#endif  // AERLOC_SVG_CHART_HPP_
