#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace femlearn {

/// Hand-emitted SVG 1.1 polyline charts, fixed 800x500 viewport. Two chart
/// shapes are needed: a plain two-series x/y chart (solution files) and a
/// dual-axis chart with a log-scale left axis for the cost and a linear right
/// axis for the error (trace files).

struct SvgSeries {
    std::string name;
    std::vector<double> xs, ys;
};

namespace svg_detail {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 730, kTop = 40, kBottom = 440;

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    static Axis fit(const std::vector<const std::vector<double>*>& data, bool log) {
        Axis ax;
        ax.log = log;
        double lo = 0.0, hi = 0.0;
        bool seen = false;
        for (const auto* v : data)
            for (double x : *v) {
                if (log && !(x > 0.0)) continue;
                const double t = log ? std::log10(x) : x;
                if (!seen) { lo = hi = t; seen = true; }
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
        if (!seen) { lo = log ? -1.0 : 0.0; hi = log ? 1.0 : 1.0; }
        if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
        ax.lo = lo;
        ax.hi = hi;
        return ax;
    }

    double unit(double v) const {
        const double t = log ? std::log10(std::max(v, 1e-300)) : v;
        return (t - lo) / (hi - lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> ts;
        for (int k = 0; k < 5; ++k) {
            const double t = lo + (hi - lo) * k / 4.0;
            ts.push_back(log ? std::pow(10.0, t) : t);
        }
        return ts;
    }
};

inline double px_x(const Axis& ax, double v) { return kLeft + (kRight - kLeft) * ax.unit(v); }
inline double px_y(const Axis& ax, double v) { return kBottom - (kBottom - kTop) * ax.unit(v); }

inline void emit_polyline(std::ostringstream& os, const SvgSeries& s, const Axis& xax,
                          const Axis& yax, const char* color) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (i) os << ' ';
        os << fmt(px_x(xax, s.xs[i])) << ',' << fmt(px_y(yax, s.ys[i]));
    }
    os << "\"/>\n";
}

inline void emit_frame(std::ostringstream& os) {
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << (kRight - kLeft)
       << "\" height=\"" << (kBottom - kTop)
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

inline void emit_x_ticks(std::ostringstream& os, const Axis& xax, const std::string& label) {
    for (double t : xax.ticks()) {
        const double x = px_x(xax, t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << kBottom << "\" x2=\"" << fmt(x)
           << "\" y2=\"" << kBottom + 6 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << kBottom + 22
           << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 44
       << "\" font-size=\"13\" text-anchor=\"middle\">" << label << "</text>\n";
}

inline void emit_y_ticks(std::ostringstream& os, const Axis& yax, bool right_side,
                         const std::string& label, const char* color) {
    const double edge = right_side ? kRight : kLeft;
    const double dir = right_side ? 1.0 : -1.0;
    for (double t : yax.ticks()) {
        const double y = px_y(yax, t);
        os << "<line x1=\"" << fmt(edge) << "\" y1=\"" << fmt(y) << "\" x2=\""
           << fmt(edge + 6 * dir) << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(edge + 10 * dir) << "\" y=\"" << fmt(y + 4)
           << "\" font-size=\"12\" text-anchor=\"" << (right_side ? "start" : "end")
           << "\" fill=\"" << color << "\">" << fmt(t) << "</text>\n";
    }
    os << "<text x=\"" << fmt(edge + 55 * dir) << "\" y=\"" << (kTop + kBottom) / 2
       << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"" << color << "\" transform=\"rotate("
       << (right_side ? 90 : -90) << ' ' << fmt(edge + 55 * dir) << ' ' << (kTop + kBottom) / 2
       << ")\">" << label << "</text>\n";
}

inline std::string document(const std::string& body) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << body << "</svg>\n";
    return os.str();
}

} // namespace svg_detail

/// Two series on shared linear axes.
inline std::string render_xy_svg(const SvgSeries& a, const SvgSeries& b, const std::string& xlabel,
                                 const std::string& ylabel) {
    using namespace svg_detail;
    const Axis xax = Axis::fit({&a.xs, &b.xs}, false);
    const Axis yax = Axis::fit({&a.ys, &b.ys}, false);
    std::ostringstream os;
    emit_frame(os);
    emit_x_ticks(os, xax, xlabel);
    emit_y_ticks(os, yax, false, ylabel, "black");
    emit_polyline(os, a, xax, yax, "#c62828");
    emit_polyline(os, b, xax, yax, "#1565c0");
    os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop - 14
       << "\" font-size=\"13\" fill=\"#c62828\">" << a.name << "</text>\n";
    os << "<text x=\"" << kLeft + 160 << "\" y=\"" << kTop - 14
       << "\" font-size=\"13\" fill=\"#1565c0\">" << b.name << "</text>\n";
    return document(os.str());
}

/// Dual-axis chart: `left` against a log-scale left axis, `right` against a
/// linear right axis, shared x.
inline std::string render_dual_axis_svg(const SvgSeries& left, const SvgSeries& right,
                                        const std::string& xlabel) {
    using namespace svg_detail;
    const Axis xax = Axis::fit({&left.xs, &right.xs}, false);
    const Axis lax = Axis::fit({&left.ys}, true);
    const Axis rax = Axis::fit({&right.ys}, false);
    std::ostringstream os;
    emit_frame(os);
    emit_x_ticks(os, xax, xlabel);
    emit_y_ticks(os, lax, false, left.name, "#1565c0");
    emit_y_ticks(os, rax, true, right.name, "#333333");
    emit_polyline(os, left, xax, lax, "#1565c0");
    emit_polyline(os, right, xax, rax, "#333333");
    os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop - 14
       << "\" font-size=\"13\" fill=\"#1565c0\">" << left.name << "</text>\n";
    os << "<text x=\"" << kLeft + 160 << "\" y=\"" << kTop - 14
       << "\" font-size=\"13\" fill=\"#333333\">" << right.name << "</text>\n";
    return document(os.str());
}

} // namespace femlearn
