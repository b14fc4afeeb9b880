#pragma once

#include <string>
#include <vector>

namespace lab {

struct ChartSeries {
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
};

// Writes a self-contained SVG line chart (640x480). Log axes drop points
// with nonpositive coordinates. Throws ConfigError when the file cannot be
// opened or no finite point survives.
void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<ChartSeries>& series);

}  // namespace lab
