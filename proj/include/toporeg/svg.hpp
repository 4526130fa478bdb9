#ifndef TOPOREG_SVG_HPP
#define TOPOREG_SVG_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "toporeg/errors.hpp"
#include "toporeg/io.hpp"
#include "toporeg/optimizer.hpp"
#include "toporeg/persistence.hpp"
#include "toporeg/point_cloud.hpp"

namespace toporeg {

namespace detail {

constexpr int kSvgW = 640;
constexpr int kSvgH = 480;
constexpr double kMargin = 56.0;

inline const char* palette(int label) {
    static const char* colors[] = {"#3366cc", "#dc5c32", "#2ca05a", "#9462bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
                                   "#17becf", "#aec7e8"};
    return colors[((label % 10) + 10) % 10];
}

struct AxisMap {
    double lo = 0.0, hi = 1.0, pix0 = 0.0, pix1 = 1.0;
    double operator()(double v) const { return pix0 + (v - lo) / (hi - lo) * (pix1 - pix0); }
};

inline AxisMap axis(double lo, double hi, double pix0, double pix1) {
    if (!(hi > lo)) {
        const double pad = (lo == 0.0) ? 1.0 : std::fabs(lo) * 0.5 + 1e-9;
        lo -= pad;
        hi += pad;
    }
    return AxisMap{lo, hi, pix0, pix1};
}

inline std::string svg_open(const std::string& title) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- generator: toporeg svg v1 -->\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgW << "\" height=\""
        << kSvgH << "\" viewBox=\"0 0 " << kSvgW << ' ' << kSvgH << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kSvgW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    return out.str();
}

inline void svg_axes(std::ostringstream& out, const AxisMap& x, const AxisMap& y,
                     const std::string& xlabel, const std::string& ylabel) {
    out << "<line x1=\"" << x.pix0 << "\" y1=\"" << y.pix0 << "\" x2=\"" << x.pix1 << "\" y2=\""
        << y.pix0 << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x.pix0 << "\" y1=\"" << y.pix0 << "\" x2=\"" << x.pix0 << "\" y2=\""
        << y.pix1 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x.pix0 << "\" y=\"" << y.pix0 + 28 << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << format_double(x.lo) << "</text>\n"
        << "<text x=\"" << x.pix1 << "\" y=\"" << y.pix0 + 28
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(x.hi) << "</text>\n"
        << "<text x=\"" << x.pix0 - 6 << "\" y=\"" << y.pix0
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(y.lo) << "</text>\n"
        << "<text x=\"" << x.pix0 - 6 << "\" y=\"" << y.pix1 + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(y.hi) << "</text>\n";
    out << "<text x=\"" << (x.pix0 + x.pix1) / 2 << "\" y=\"" << y.pix0 + 44
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (y.pix0 + y.pix1) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << (y.pix0 + y.pix1) / 2 << ")\">" << ylabel
        << "</text>\n";
}

} // namespace detail

// Scatter plot of a 2-D embedding, optionally colored by integer label.
inline std::string svg_scatter(const PointCloud& cloud, const std::vector<int>& labels = {},
                               const std::string& title = "embedding") {
    using namespace detail;
    if (!labels.empty() && labels.size() != cloud.points.size())
        fail(ErrorCode::LengthMismatch, "labels do not match the cloud");
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (!cloud.points.empty()) {
        xlo = xhi = cloud.points[0].x;
        ylo = yhi = cloud.points[0].y;
        for (const Vec2& p : cloud.points) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
    }
    const AxisMap x = axis(xlo, xhi, kMargin, kSvgW - kMargin);
    const AxisMap y = axis(ylo, yhi, kSvgH - kMargin, kMargin); // svg y grows downward
    std::ostringstream out;
    out << svg_open(title);
    svg_axes(out, x, y, "x", "y");
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const char* color = labels.empty() ? palette(0) : palette(labels[i]);
        out << "<circle cx=\"" << format_double(x(cloud.points[i].x)) << "\" cy=\""
            << format_double(y(cloud.points[i].y)) << "\" r=\"4\" fill=\"" << color
            << "\" fill-opacity=\"0.8\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Persistence diagram: birth on x, death on y, essential pairs on the top
// border, H0 and H1 in different colors.
inline std::string svg_diagram(const std::vector<PersistenceDiagram>& diagrams,
                               const std::string& title = "persistence diagram") {
    using namespace detail;
    double vmax = 0.0;
    for (const auto& dgm : diagrams)
        for (const auto& p : dgm.pairs) {
            vmax = std::max(vmax, p.birth);
            if (!p.essential()) vmax = std::max(vmax, p.death);
        }
    if (vmax <= 0.0) vmax = 1.0;
    vmax *= 1.05;
    const AxisMap x = axis(0.0, vmax, kMargin, kSvgW - kMargin);
    const AxisMap y = axis(0.0, vmax, kSvgH - kMargin, kMargin);
    std::ostringstream out;
    out << svg_open(title);
    svg_axes(out, x, y, "birth", "death");
    out << "<line x1=\"" << x(0.0) << "\" y1=\"" << y(0.0) << "\" x2=\"" << x(vmax) << "\" y2=\""
        << y(vmax) << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& dgm : diagrams) {
        const char* color = dgm.dimension == 0 ? palette(0) : palette(1);
        for (const auto& p : dgm.pairs) {
            if (p.essential())
                out << "<path d=\"M " << format_double(x(p.birth) - 5) << ' '
                    << format_double(y(vmax) + 9) << " l 5 -9 l 5 9 z\" fill=\"" << color
                    << "\"/>\n";
            else
                out << "<circle cx=\"" << format_double(x(p.birth)) << "\" cy=\""
                    << format_double(y(p.death)) << "\" r=\"4\" fill=\"" << color
                    << "\" fill-opacity=\"0.85\"/>\n";
        }
    }
    out << "<text x=\"" << kSvgW - kMargin << "\" y=\"40\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"12\"><tspan fill=\"" << palette(0)
        << "\">dim 0</tspan>  <tspan fill=\"" << palette(1) << "\">dim 1</tspan></text>\n";
    out << "</svg>\n";
    return out.str();
}

// Loss curves over recorded epochs.
inline std::string svg_trace(const LossTrace& trace, const std::string& title = "loss trace") {
    using namespace detail;
    double lo = 0.0, hi = 1.0;
    int emax = 1;
    if (!trace.entries.empty()) {
        lo = hi = trace.entries[0].emb_loss;
        for (const auto& e : trace.entries) {
            for (double v : {e.emb_loss, e.topo_loss, e.total_loss}) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            emax = std::max(emax, e.epoch);
        }
    }
    const AxisMap x = axis(0.0, static_cast<double>(emax), kMargin, kSvgW - kMargin);
    const AxisMap y = axis(lo, hi, kSvgH - kMargin, kMargin);
    std::ostringstream out;
    out << svg_open(title);
    svg_axes(out, x, y, "epoch", "loss");
    const char* colors[3] = {palette(0), palette(1), palette(2)};
    const char* names[3] = {"embedding", "topological", "total"};
    for (int series = 0; series < 3; ++series) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[series] << "\" points=\"";
        for (const auto& e : trace.entries) {
            const double v =
                series == 0 ? e.emb_loss : (series == 1 ? e.topo_loss : e.total_loss);
            out << format_double(x(static_cast<double>(e.epoch))) << ',' << format_double(y(v))
                << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << kSvgW - kMargin << "\" y=\"" << 40 + 16 * series
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << colors[series] << "\">" << names[series] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << content;
}

} // namespace toporeg

#endif
