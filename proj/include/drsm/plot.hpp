#pragma once

#include <string>
#include <vector>

#include "drsm/core.hpp"

namespace drsm {

// One parsed trajectory CSV (schema iter,t_cum,f,gap,step,elapsed_ms).
struct TrajectorySeries {
  std::string label;
  std::vector<double> iter;
  std::vector<double> value;
};

TrajectorySeries read_trajectory_csv(const std::string& path);

// Hand-emitted SVG line chart: x = iteration, y = f, one polyline per series
// with a distinct color/dash pattern and a legend. 800x600 viewBox.
std::string render_svg(const std::vector<TrajectorySeries>& series);
void write_svg(const std::string& out_path, const std::vector<TrajectorySeries>& series);

}  // namespace drsm
