#pragma once

// Minimal SVG rendering for experiment outputs. Presentation only.

#include <string>
#include <utility>
#include <vector>

#include "dqwifi/analysis.hpp"

namespace dqwifi {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool step = false;  // draw as a right-continuous step function (CDFs)
};

struct ChartLabels {
  std::string title;
  std::string x;
  std::string y;
};

std::string line_chart_svg(const std::vector<Series>& series, const ChartLabels& labels);

/// One series per DeltaQ, stepped, y in [0, 1].
std::string cdf_chart_svg(const std::vector<std::pair<std::string, DeltaQ>>& curves,
                          const ChartLabels& labels);

/// Diverging colour map centred on zero: packet size across, stations up.
std::string heatmap_svg(const std::vector<HeatmapCell>& cells, const ChartLabels& labels);

}  // namespace dqwifi
