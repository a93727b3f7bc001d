#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace atomlight {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color; // any SVG colour; empty picks from a fixed palette
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    double width = 720.0;
    double height = 440.0;
};

// A self-contained SVG line plot with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);
void write_svg(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

} // namespace atomlight
