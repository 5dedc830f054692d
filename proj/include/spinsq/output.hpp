#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinsq/analysis.hpp"

namespace spinsq {

/// Numeric table written as CSV with 15 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    void write_csv(std::ostream& out) const;
    void save(const std::string& path) const;
};

std::string format_number(double x);

/// One row per time point: exact, raw and corrected records, plus the shot
/// estimates when present.
Table series_table(const Series& s);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<PlotSeries> series;
    std::optional<double> hline;  ///< dashed reference level
    bool log_x = false;
    bool log_y = false;
};

/// Self-contained SVG line/scatter plot.
std::string render_svg(const PlotSpec& plot);

void write_text(const std::string& path, const std::string& text);

}  // namespace spinsq
