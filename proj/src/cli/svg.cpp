#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "s25/cli.hpp"
#include "s25/errors.hpp"

namespace s25 {

namespace {

std::string xml_escape(const std::string& s) {
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

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Log-log mapping of data coordinates into the plot rectangle.
struct Axes {
    double x0, x1, y0, y1;  // data range, decades
    double left = 80, right = 760, top = 40, bottom = 520;

    double px(double ai) const { return left + (std::log10(ai) - x0) / (x1 - x0) * (right - left); }
    double py(double g) const { return bottom - (std::log10(g) - y0) / (y1 - y0) * (bottom - top); }
};

}  // namespace

std::string roofline_svg(const std::vector<BenchRecord>& records, const MachineProfile& m) {
    if (records.empty()) throw ConfigError("roofline: no records to plot");
    m.validate();
    const Precision prec = records.front().precision;
    const double peak = std::max(m.peak_gflops_f32, m.peak_gflops_f64);

    double ai_lo = 0.01, ai_hi = 100, g_lo = 1, g_hi = peak;
    for (const auto& r : records) {
        if (r.ai_mem > 0) {
            ai_lo = std::min(ai_lo, r.ai_mem);
            ai_hi = std::max(ai_hi, r.ai_mem);
        }
        if (r.gflops > 0) g_lo = std::min(g_lo, r.gflops);
    }
    for (const auto& l : m.levels) g_lo = std::min(g_lo, ai_lo * l.bytes_per_s * 1e-9);
    Axes ax{std::floor(std::log10(ai_lo)), std::ceil(std::log10(ai_hi)),
            std::floor(std::log10(g_lo)), std::ceil(std::log10(g_hi * 2))};

    std::ostringstream os;
    os << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
       << R"(<svg xmlns="http://www.w3.org/2000/svg" width="800" height="580" viewBox="0 0 800 580" font-family="sans-serif" font-size="11">)"
       << '\n';
    os << R"(<rect x="0" y="0" width="800" height="580" fill="white"/>)" << '\n';
    os << "<rect x=\"" << ax.left << "\" y=\"" << ax.top << "\" width=\"" << ax.right - ax.left
       << "\" height=\"" << ax.bottom - ax.top << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Decade grid and tick labels.
    for (int d = int(ax.x0); d <= int(ax.x1); ++d) {
        const double x = ax.px(std::pow(10.0, d));
        os << "<line x1=\"" << x << "\" y1=\"" << ax.top << "\" x2=\"" << x << "\" y2=\"" << ax.bottom
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << ax.bottom + 16 << "\" text-anchor=\"middle\">1e" << d
           << "</text>\n";
    }
    for (int d = int(ax.y0); d <= int(ax.y1); ++d) {
        const double y = ax.py(std::pow(10.0, d));
        os << "<line x1=\"" << ax.left << "\" y1=\"" << y << "\" x2=\"" << ax.right << "\" y2=\"" << y
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << ax.left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d
           << "</text>\n";
    }
    os << "<text x=\"" << (ax.left + ax.right) / 2 << "\" y=\"" << ax.bottom + 40
       << "\" text-anchor=\"middle\">Arithmetic intensity (FLOP/byte)</text>\n";
    os << "<text x=\"20\" y=\"" << (ax.top + ax.bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << (ax.top + ax.bottom) / 2 << ")\">GFLOP/s</text>\n";

    // Compute roof for the records' precision, then one ceiling per level.
    const double roof = m.peak_gflops(prec);
    const double xmin = std::pow(10.0, ax.x0), xmax = std::pow(10.0, ax.x1);
    os << "<polyline class=\"roof\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\""
       << ax.px(xmin) << ',' << ax.py(roof) << ' ' << ax.px(xmax) << ',' << ax.py(roof) << "\"/>\n";
    os << "<text x=\"" << ax.right - 4 << "\" y=\"" << ax.py(roof) - 4 << "\" text-anchor=\"end\">"
       << xml_escape(to_string(prec)) << " peak " << fmt("%.1f", roof) << " GFLOP/s</text>\n";
    const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    for (std::size_t i = 0; i < m.levels.size(); ++i) {
        const auto& l = m.levels[i];
        const double bw = l.bytes_per_s * 1e-9;
        const double ridge = std::clamp(roof / bw, xmin, xmax);
        const double start = std::max(xmin, std::pow(10.0, ax.y0) / bw);
        os << "<polyline class=\"ceiling\" fill=\"none\" stroke=\"" << colors[i % 5]
           << "\" stroke-width=\"1.5\" points=\"" << ax.px(start) << ',' << ax.py(start * bw) << ' '
           << ax.px(ridge) << ',' << ax.py(ridge * bw) << "\"/>\n";
        os << "<text x=\"" << ax.px(start) + 4 << "\" y=\"" << ax.py(start * bw) - 6 << "\" fill=\""
           << colors[i % 5] << "\">" << xml_escape(l.label) << ' ' << fmt("%.1f", bw)
           << " GB/s</text>\n";
    }

    // Points, annotated against the memory level.
    const BandwidthLevel* mem = m.level("MEM");
    if (!mem) mem = &m.levels.back();
    for (const auto& r : records) {
        if (!(r.ai_mem > 0) || !(r.gflops > 0)) continue;
        const double att = attainable(r.ai_mem, m.peak_gflops(r.precision), *mem).attainable_gflops;
        const double pct = achieved_pct(r.gflops, att);
        const double x = ax.px(r.ai_mem), y = ax.py(r.gflops);
        os << "<circle class=\"point\" data-ai=\"" << fmt("%.9g", r.ai_mem) << "\" data-gflops=\""
           << fmt("%.9g", r.gflops) << "\" cx=\"" << x << "\" cy=\"" << y
           << "\" r=\"4\" fill=\"orange\" stroke=\"black\"/>\n";
        os << "<text x=\"" << x + 6 << "\" y=\"" << y - 6 << "\">" << xml_escape(r.variant) << " ("
           << fmt("%.1f%%", pct) << ")</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace s25
