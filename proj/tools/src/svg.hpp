#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tscal::cli {

/// Version tag embedded in every emitted SVG; plots are pure functions of
/// the CSV data for a fixed tag.
inline constexpr const char* kSvgRendererTag = "tscal-svg 1";

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Minimal deterministic polyline chart.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series, bool log_x = false,
                           bool log_y = false);

/// Panel with the original and averaged trajectories of a trajectory CSV
/// (columns t, x, xi).
std::string trajectory_svg_from_csv(const std::string& csv_text,
                                    const std::string& title);

/// Log-log panel of max_diff against epsilon from a sweep summary CSV
/// (columns q, epsilon, max_diff, kind).
std::string sweep_svg_from_csv(const std::string& csv_text,
                               const std::string& title);

} // namespace tscal::cli
