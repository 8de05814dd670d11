#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lawtraverse::svg {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), both > 0
    bool dashed = false;
};

struct Marker {
    double x = 0;
    double y = 0;
    std::string label;
};

// Log-log axes plus view box. Points map as
//   px = left + (log10 x - x_lo) / (x_hi - x_lo) * plot_width
//   py = top + (y_hi - log10 y) / (y_hi - y_lo) * plot_height
// and the bounds are written as data-* attributes on the plot group.
struct Axes {
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;  // log10 bounds
    double left = 70, top = 30, plot_width = 560, plot_height = 380;
};

Axes fit_axes(const std::vector<Series>& series, const std::vector<Marker>& markers);

std::string render_loglog(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series, const std::vector<Marker>& markers);

}  // namespace lawtraverse::svg
