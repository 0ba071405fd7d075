#pragma once

#include <string>
#include <vector>

namespace adbench::svg {

struct Bar {
  std::string label;
  double value = 0.0;
  double error = 0.0;  // half-height of the error bar; 0 draws none
  std::string group;   // optional secondary series name, drawn as a second colour
};

struct ChartOptions {
  std::string title;
  std::string y_label;
  /// Axis range; when lo >= hi it is derived from the data (always including 0).
  double lo = 0.0;
  double hi = 0.0;
};

/// Vertical bar chart, bars in the given order. Output depends only on the
/// inputs, so identical data yields identical bytes.
std::string bar_chart(const std::vector<Bar>& bars, const ChartOptions& options);

std::string escape(const std::string& text);

}  // namespace adbench::svg
