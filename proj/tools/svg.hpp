#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wavelqg::cli::svg {

// z[iy][ix] over log-spaced x and y axes, coloured by log10(z). The overlay
// polyline is drawn in data coordinates.
struct Heatmap {
  std::vector<double> x, y;
  std::vector<std::vector<double>> z;
  std::vector<std::pair<double, double>> overlay;
  std::string title, x_label, y_label, z_label;
};

struct Series {
  std::string name;
  std::vector<double> y;
};

// Log-log line plot, one polyline per series over a shared x axis.
struct LinePlot {
  std::vector<double> x;
  std::vector<Series> series;
  std::string title, x_label, y_label;
};

std::string render(const Heatmap& h);
std::string render(const LinePlot& p);

}  // namespace wavelqg::cli::svg
