#include "lawtraverse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lawtraverse::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Axes fit_axes(const std::vector<Series>& series, const std::vector<Marker>& markers) {
    double xl = std::numeric_limits<double>::infinity(), xh = -xl, yl = xl, yh = -xl;
    auto take = [&](double x, double y) {
        if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) return;
        xl = std::min(xl, std::log10(x));
        xh = std::max(xh, std::log10(x));
        yl = std::min(yl, std::log10(y));
        yh = std::max(yh, std::log10(y));
    };
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) take(x, y);
    for (const auto& m : markers) take(m.x, m.y);
    Axes a;
    if (!std::isfinite(xl)) return a;
    auto pad = [](double& lo, double& hi) {
        if (hi - lo < 1e-9) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.03 * (hi - lo);
        lo -= m;
        hi += m;
    };
    pad(xl, xh);
    pad(yl, yh);
    a.x_lo = xl;
    a.x_hi = xh;
    a.y_lo = yl;
    a.y_hi = yh;
    return a;
}

std::string render_loglog(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series, const std::vector<Marker>& markers) {
    const Axes ax = fit_axes(series, markers);
    const double width = ax.left + ax.plot_width + 170;
    const double height = ax.top + ax.plot_height + 50;
    auto px = [&](double x) { return ax.left + (std::log10(x) - ax.x_lo) / (ax.x_hi - ax.x_lo) * ax.plot_width; };
    auto py = [&](double y) { return ax.top + (ax.y_hi - std::log10(y)) / (ax.y_hi - ax.y_lo) * ax.plot_height; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<title>" + escape(title) + "</title>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"white\"/>\n";
    out += "<g id=\"plot\" data-log10-x-min=\"" + fmt_g(ax.x_lo) + "\" data-log10-x-max=\"" + fmt_g(ax.x_hi) +
           "\" data-log10-y-min=\"" + fmt_g(ax.y_lo) + "\" data-log10-y-max=\"" + fmt_g(ax.y_hi) + "\" data-left=\"" +
           fmt_g(ax.left) + "\" data-top=\"" + fmt_g(ax.top) + "\" data-width=\"" + fmt_g(ax.plot_width) +
           "\" data-height=\"" + fmt_g(ax.plot_height) + "\">\n";
    out += "<rect x=\"" + fmt(ax.left) + "\" y=\"" + fmt(ax.top) + "\" width=\"" + fmt(ax.plot_width) +
           "\" height=\"" + fmt(ax.plot_height) + "\" fill=\"none\" stroke=\"black\"/>\n";

    // decade ticks
    for (int k = static_cast<int>(std::ceil(ax.x_lo)); k <= static_cast<int>(std::floor(ax.x_hi)); ++k) {
        const double x = px(std::pow(10.0, k));
        out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(ax.top + ax.plot_height) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
               fmt(ax.top + ax.plot_height + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(ax.top + ax.plot_height + 17) +
               "\" text-anchor=\"middle\">1e" + std::to_string(k) + "</text>\n";
    }
    const double y_span = ax.y_hi - ax.y_lo;
    const double y_step = y_span > 2 ? 1.0 : (y_span > 0.5 ? 0.1 : 0.02);
    for (double k = std::ceil(ax.y_lo / y_step) * y_step; k <= ax.y_hi; k += y_step) {
        const double v = std::pow(10.0, k);
        const double y = py(v);
        char label[32];
        std::snprintf(label, sizeof label, "%.3g", v);
        out += "<line x1=\"" + fmt(ax.left - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(ax.left) + "\" y2=\"" + fmt(y) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(ax.left - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" + label + "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = kPalette[i % std::size(kPalette)];
        std::string pts;
        for (const auto& [x, y] : s.points) {
            if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) continue;
            if (!pts.empty()) pts += ' ';
            pts += fmt(px(x)) + "," + fmt(py(y));
        }
        out += "<polyline data-label=\"" + escape(s.label) + "\" fill=\"none\" stroke=\"" + colour +
               "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"" + pts + "\"/>\n";
        const double ly = ax.top + 12 + 16 * static_cast<double>(i);
        const double lx = ax.left + ax.plot_width + 12;
        out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 20) + "\" y2=\"" + fmt(ly - 4) +
               "\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n";
        out += "<text x=\"" + fmt(lx + 26) + "\" y=\"" + fmt(ly) + "\">" + escape(s.label) + "</text>\n";
    }

    for (const auto& m : markers) {
        if (!(m.x > 0) || !(m.y > 0)) continue;
        const double x = px(m.x), y = py(m.y);
        out += "<path class=\"marker\" data-label=\"" + escape(m.label) + "\" d=\"M" + fmt(x - 4) + "," + fmt(y - 4) +
               " L" + fmt(x + 4) + "," + fmt(y + 4) + " M" + fmt(x - 4) + "," + fmt(y + 4) + " L" + fmt(x + 4) + "," +
               fmt(y - 4) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    out += "</g>\n";
    out += "<text x=\"" + fmt(ax.left + ax.plot_width / 2) + "\" y=\"" + fmt(height - 8) + "\" text-anchor=\"middle\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"14\" y=\"" + fmt(ax.top + ax.plot_height / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           fmt(ax.top + ax.plot_height / 2) + ")\">" + escape(y_label) + "</text>\n";
    out += "<text x=\"" + fmt(ax.left) + "\" y=\"18\" font-size=\"13\">" + escape(title) + "</text>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace lawtraverse::svg
