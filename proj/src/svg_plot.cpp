#include "alpos/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "alpos/errors.hpp"

namespace alpos {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 180.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 60.0;

const char* series_color(Strategy s) {
    switch (s) {
        case Strategy::Random: return "#808080";
        case Strategy::Genie: return "#d62728";
        case Strategy::Practical: return "#1f77b4";
        case Strategy::Rand60: return "#bcbd22";
        case Strategy::Rand100: return "#2ca02c";
    }
    return "#000000";
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(6) << v;
    return out.str();
}

}  // namespace

std::string render_summary_svg(const SummaryTable& summary) {
    if (summary.empty()) throw InvalidConfig("emit_plot: empty summary");

    std::set<int> bs_set;
    double y_min = 1e300, y_max = -1e300;
    // series key: (strategy, test_set) -> bs_count -> q90_after
    std::map<std::pair<int, std::string>, std::map<int, double>> series;
    for (const SummaryRow& row : summary) {
        bs_set.insert(row.bs_count);
        series[{static_cast<int>(row.strategy), row.test_set}][row.bs_count] =
            row.mean_q90_after_m;
        y_min = std::min(y_min, row.mean_q90_after_m);
        y_max = std::max(y_max, row.mean_q90_after_m);
    }
    const double y_span = std::max(y_max - y_min, 1e-9);
    y_min -= 0.1 * y_span;
    y_max += 0.1 * y_span;
    const double x_min = static_cast<double>(*bs_set.begin()) - 0.5;
    const double x_max = static_cast<double>(*bs_set.rbegin()) + 0.5;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) {
        return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
    };
    auto sy = [&](double y) {
        return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
        << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks at each BS count
    for (int bs : bs_set) {
        const double px = sx(bs);
        svg << "<line x1=\"" << px << "\" y1=\"" << kMarginTop + plot_h
            << "\" x2=\"" << px << "\" y2=\"" << kMarginTop + plot_h + 6
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << kMarginTop + plot_h + 22
            << "\" text-anchor=\"middle\" font-size=\"13\">" << bs
            << "</text>\n";
    }
    // y ticks: 5 evenly spaced
    for (int t = 0; t <= 4; ++t) {
        const double yv = y_min + (y_max - y_min) * t / 4.0;
        const double py = sy(yv);
        svg << "<line x1=\"" << kMarginLeft - 6 << "\" y1=\"" << py
            << "\" x2=\"" << kMarginLeft << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kMarginLeft - 10 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\" font-size=\"13\">" << std::fixed
            << std::setprecision(1) << yv << "</text>\n";
        svg.unsetf(std::ios_base::floatfield);
    }
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
        << kHeight - 15 << "\" text-anchor=\"middle\" font-size=\"15\">"
        << "Number of BS</text>\n";
    svg << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"15\" transform=\"rotate(-90 "
           "18 "
        << kMarginTop + plot_h / 2 << ")\">Q(0.9) [m]</text>\n";

    double legend_y = kMarginTop + 10;
    for (const auto& [key, points] : series) {
        const auto strategy = static_cast<Strategy>(key.first);
        const std::string label = strategy_name(strategy) + " " + key.second;
        const char* color = series_color(strategy);
        const char* dash = key.second == "test2" ? "6,4" : "";
        if (points.size() == 1) {
            const auto& [bs, q] = *points.begin();
            svg << "<circle cx=\"" << fmt(sx(bs)) << "\" cy=\"" << fmt(sy(q))
                << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\"";
            if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
            svg << " points=\"";
            for (const auto& [bs, q] : points)
                svg << fmt(sx(bs)) << "," << fmt(sy(q)) << " ";
            svg << "\"/>\n";
            for (const auto& [bs, q] : points)
                svg << "<circle cx=\"" << fmt(sx(bs)) << "\" cy=\""
                    << fmt(sy(q)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double lx = kMarginLeft + plot_w + 15;
        svg << "<line x1=\"" << lx << "\" y1=\"" << legend_y << "\" x2=\""
            << lx + 24 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"";
        if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
        svg << "/>\n";
        svg << "<text x=\"" << lx + 30 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"13\">" << label << "</text>\n";
        legend_y += 20;
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const SummaryTable& summary, const std::string& out_path) {
    const std::string svg = render_summary_svg(summary);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    out << svg;
    if (!out) throw IoError("write failed for " + out_path);
}

}  // namespace alpos
