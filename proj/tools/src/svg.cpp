#include "svg.hpp"

#include "csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tscal::cli {

namespace {

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

constexpr double kW = 720, kH = 480;
constexpr double kL = 72, kR = 24, kT = 40, kB = 56;

const char* kPalette[] = {"#1f6fb4", "#d45500", "#2e8b57", "#8b2e8b",
                          "#b49a1f", "#555555"};

} // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series, bool log_x,
                           bool log_y) {
    auto tx = [log_x](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [log_y](double v) { return log_y ? std::log10(v) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (log_x && !(x > 0)) continue;
            if (log_y && !(y > 0)) continue;
            xmin = std::min(xmin, tx(x)); xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y)); ymax = std::max(ymax, ty(y));
        }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }

    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto px = [&](double v) { return kL + (tx(v) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return kT + ph - (ty(v) - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
       << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    os << "<!-- renderer: " << kSvgRendererTag << " -->\n";
    os << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw
       << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 4;
        const double fy = ymin + (ymax - ymin) * k / 4;
        const double gx = kL + pw * k / 4;
        const double gy = kT + ph - ph * k / 4;
        const double lx = log_x ? std::pow(10.0, fx) : fx;
        const double ly = log_y ? std::pow(10.0, fy) : fy;
        os << "<line x1=\"" << coord(gx) << "\" y1=\"" << kT + ph << "\" x2=\""
           << coord(gx) << "\" y2=\"" << kT + ph + 5 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << coord(gx) << "\" y=\"" << kT + ph + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">" << g6(lx) << "</text>\n";
        os << "<line x1=\"" << kL - 5 << "\" y1=\"" << coord(gy) << "\" x2=\"" << kL
           << "\" y2=\"" << coord(gy) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << kL - 8 << "\" y=\"" << coord(gy + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << g6(ly) << "</text>\n";
    }
    os << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << kT + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          "transform=\"rotate(-90 18 " << kT + ph / 2 << ")\">" << y_label
       << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % 6];
        std::ostringstream pts;
        for (const auto& [x, y] : series[si].points) {
            if (log_x && !(x > 0)) continue;
            if (log_y && !(y > 0)) continue;
            pts << coord(px(x)) << ',' << coord(py(y)) << ' ';
        }
        os << "<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        const double lyy = kT + 16 + 16 * static_cast<double>(si);
        os << "<line x1=\"" << kL + pw - 130 << "\" y1=\"" << coord(lyy - 4)
           << "\" x2=\"" << kL + pw - 110 << "\" y2=\"" << coord(lyy - 4)
           << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << kL + pw - 104 << "\" y=\"" << coord(lyy)
           << "\" font-family=\"sans-serif\" font-size=\"11\">"
           << series[si].name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string trajectory_svg_from_csv(const std::string& csv_text,
                                    const std::string& title) {
    const auto table = CsvTable::parse(csv_text);
    const auto ct = table.column("t");
    const auto cx = table.column("x");
    const auto cxi = table.column("xi");
    Series orig{"x (original)", {}};
    Series avg{"xi (averaged)", {}};
    for (const auto& row : table.rows) {
        const double t = std::strtod(row[ct].c_str(), nullptr);
        orig.points.emplace_back(t, std::strtod(row[cx].c_str(), nullptr));
        avg.points.emplace_back(t, std::strtod(row[cxi].c_str(), nullptr));
    }
    return line_chart_svg(title, "t", "solution", {orig, avg});
}

std::string sweep_svg_from_csv(const std::string& csv_text,
                               const std::string& title) {
    const auto table = CsvTable::parse(csv_text);
    const auto cq = table.column("q");
    const auto ce = table.column("epsilon");
    const auto cd = table.column("max_diff");
    const auto ck = table.column("kind");
    std::vector<Series> series;
    for (const auto& row : table.rows) {
        if (row[ck] != "point") continue;
        const std::string name = "q=" + row[cq];
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.name == name; });
        if (it == series.end()) {
            series.push_back({name, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(std::strtod(row[ce].c_str(), nullptr),
                                std::strtod(row[cd].c_str(), nullptr));
    }
    for (auto& s : series) std::sort(s.points.begin(), s.points.end());
    return line_chart_svg(title, "epsilon", "max |x - xi|", series, true, true);
}

} // namespace tscal::cli
