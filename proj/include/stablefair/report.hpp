#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stablefair/stability.hpp"

namespace stablefair {

// Writes the sweep results table. Columns, in order:
//   lambda, acc_mean, acc_std, gamma_mean, gamma_std, stab, beta_hat, beta_bound
// Absent quantities (no probes, single repetition, lambda = 0) leave their
// cell empty. Output is byte-identical for identical inputs.
void write_report_csv(const std::string& path, const std::vector<StabilityReport>& rows);

// One plotted line.
struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line plot (axes, ticks, legend); no external references,
// no timestamps, so identical inputs produce identical files.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace stablefair
