#pragma once

#include <string>
#include <vector>

namespace rg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 860;
  int height = 540;
};

// Standalone SVG line chart. Byte-deterministic for identical input: fixed
// palette, two-decimal pixel coordinates, no timestamps or random ids.
// Throws EmptySeriesError when there is nothing to draw and DomainError when
// a log axis meets data <= 0.
std::string render_svg(const std::vector<Series>& series, const ChartSpec& spec);

void write_svg(const std::string& path, const std::vector<Series>& series, const ChartSpec& spec);

}  // namespace rg
