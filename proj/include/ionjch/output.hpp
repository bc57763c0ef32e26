#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ionjch {

/// Fixed 12-significant-digit formatting used by every CSV writer.
std::string fmt_num(double v);

struct Series {
  std::string name;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Series> series;
};

/// Minimal static SVG line chart; CSV remains the authoritative output.
void write_svg(std::ostream& os, const LineChart& chart);

}  // namespace ionjch
