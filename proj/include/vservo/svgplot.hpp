#pragma once

#include <string>
#include <vector>

namespace vservo::svgplot {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct Figure {
    std::string title, xlabel, ylabel;
    std::vector<Series> series;
    int width = 860;
    int height = 480;
};

// Self-contained SVG line plot: framed axes, 1-2-5 tick grid, legend.
// Nonfinite samples break the polyline rather than corrupting it.
std::string render(const Figure& fig);

void write(const std::string& path, const Figure& fig);

} // namespace vservo::svgplot
