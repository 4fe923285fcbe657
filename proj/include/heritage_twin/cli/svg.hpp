#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace htwin::cli {

struct SvgLine {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgLine> lines;
    std::vector<double> guides;  // horizontal reference lines
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace detail

// Static line chart, fixed 900x420 canvas. Good enough to eyeball a report.
inline std::string render_svg(const SvgChart& chart) {
    constexpr double W = 900, H = 420, L = 70, R = 20, T = 40, B = 50;
    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& l : chart.lines) {
        for (double v : l.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : l.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    for (double g : chart.guides) y0 = std::min(y0, g), y1 = std::max(y1, g);
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 1, y1 += 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        W, H);
    out += fmt::format("<text x=\"{}\" y=\"22\" font-size=\"15\">{}</text>\n", L, detail::xml_escape(chart.title));
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", L, H - B, W - R);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", L, T, H - B);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{:.4g}</text>\n", L - 60, py(y1) + 4, y1);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{:.4g}</text>\n", L - 60, py(y0) + 4, y0);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{:.6g}</text>\n", L, H - B + 18, x0);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.6g}</text>\n", W - R, H - B + 18, x1);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (L + W - R) / 2, H - 12,
                       detail::xml_escape(chart.x_label));
    out += fmt::format("<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">{}</text>\n", (T + H - B) / 2,
                       (T + H - B) / 2, detail::xml_escape(chart.y_label));
    for (double g : chart.guides)
        out += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n", L,
                           py(g), W - R);
    for (std::size_t i = 0; i < chart.lines.size(); ++i) {
        const auto& l = chart.lines[i];
        const char* color = kColors[i % std::size(kColors)];
        std::string pts;
        for (std::size_t k = 0; k < l.x.size() && k < l.y.size(); ++k) pts += fmt::format("{:.2f},{:.2f} ", px(l.x[k]), py(l.y[k]));
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>\n", color, pts);
        out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - R - 200, T + 14 * (static_cast<double>(i) + 1),
                           color, detail::xml_escape(l.label));
    }
    out += "</svg>\n";
    return out;
}

} // namespace htwin::cli
