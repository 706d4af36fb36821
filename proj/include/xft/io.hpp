#ifndef XFT_IO_HPP
#define XFT_IO_HPP

// Deterministic text rendering: 17-significant-digit numbers (round-trip exact
// for doubles), trajectory-table CSV, and a minimal hand-rolled SVG line chart.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "xft/collision.hpp"

namespace xft {

inline std::string render_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string trajectory_csv_header(int num_charges) {
    std::string h = "n,nu,m,mu,prob,dhA,dhB";
    for (int i = 1; i <= num_charges; ++i) h += ",dq_" + std::to_string(i);
    h += ",delta,delta_explicit,flags";
    return h;
}

inline std::string trajectory_csv(const TrajectoryTable& table) {
    std::ostringstream out;
    out << trajectory_csv_header(table.bathA.num_charges()) << "\n";
    for (const auto& row : table.rows) {
        out << row.n << "," << row.nu << "," << row.m << "," << row.mu << ","
            << render_double(row.prob) << "," << render_double(row.dhA) << ","
            << render_double(row.dhB);
        for (double q : row.dq) out << "," << render_double(q);
        out << "," << render_double(row.delta) << ",";
        if (row.delta_explicit)
            out << render_double(*row.delta_explicit);
        else
            out << "na";
        out << "," << (row.supported ? "ok" : "unsupported") << "\n";
    }
    return out.str();
}

// One polyline per series against a shared x axis; fixed palette, fixed tick
// count, byte-deterministic for identical inputs.
struct SvgSeries {
    std::string name;
    std::vector<double> y;
};

inline std::string svg_line_chart(const std::string& x_label, const std::vector<double>& x,
                                  const std::vector<SvgSeries>& series) {
    const int width = 800, height = 500;
    const int ml = 70, mr = 160, mt = 30, mb = 50;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!x.empty()) {
        xmin = xmax = x[0];
        for (double v : x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
    }
    bool have_y = false;
    for (const auto& s : series)
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            if (!have_y) {
                ymin = ymax = v;
                have_y = true;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (!have_y || ymax == ymin) ymax = ymin + 1.0;

    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * plot_h; };
    auto coord = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", v);
        return std::string(buf);
    };
    auto tick_label = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << (mt + (int)plot_h) << "\" x2=\""
        << (ml + (int)plot_w) << "\" y2=\"" << (mt + (int)plot_h)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << (mt + (int)plot_h) << "\" stroke=\"black\"/>\n";
    const int nticks = 5;
    for (int t = 0; t <= nticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / nticks;
        const double fy = ymin + (ymax - ymin) * t / nticks;
        svg << "<line x1=\"" << coord(px(fx)) << "\" y1=\"" << (mt + (int)plot_h)
            << "\" x2=\"" << coord(px(fx)) << "\" y2=\"" << (mt + (int)plot_h + 5)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << coord(px(fx)) << "\" y=\"" << (mt + (int)plot_h + 20)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
        svg << "<line x1=\"" << (ml - 5) << "\" y1=\"" << coord(py(fy)) << "\" x2=\"" << ml
            << "\" y2=\"" << coord(py(fy)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << (ml - 8) << "\" y=\"" << coord(py(fy) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + (int)plot_w / 2) << "\" y=\"" << (height - 10)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 8];
        std::string points;
        bool open = false;
        for (size_t i = 0; i < x.size() && i < series[si].y.size(); ++i) {
            const double v = series[si].y[i];
            if (!std::isfinite(v)) {
                if (open) {
                    svg << "<polyline fill=\"none\" stroke=\"" << color
                        << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
                    points.clear();
                    open = false;
                }
                continue;
            }
            if (open) points += " ";
            points += coord(px(x[i])) + "," + coord(py(v));
            open = true;
        }
        if (open)
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
        svg << "<text x=\"" << (ml + (int)plot_w + 12) << "\" y=\"" << (mt + 16 + 18 * (int)si)
            << "\" font-size=\"12\" fill=\"" << color << "\">" << series[si].name
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace xft

#endif
