#include "prodline/svg.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace prodline {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

struct Frame {
    double x0, y0, w, h;  // pixel box
    double ymax;          // data range [0, ymax] x [0,1]
    double px(double theta) const { return x0 + theta * w; }
    double py(double q) const { return y0 + h - q / ymax * h; }
};

void segment_paths(std::string& out, const Schedule& s, const Frame& f, const char* color) {
    for (const Segment& seg : s.segments) {
        if (seg.hi <= seg.lo) continue;
        const double qa = seg.quality.at(seg.lo);
        const double qb = seg.quality.at(seg.hi);
        out += "  <line x1=\"" + num(f.px(seg.lo)) + "\" y1=\"" + num(f.py(qa)) + "\" x2=\"" +
               num(f.px(seg.hi)) + "\" y2=\"" + num(f.py(qb)) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
    }
}

// Offered-quality set of a schedule: atoms (constant cells) and intervals
// (separating cells' images).
void product_line_bar(std::string& out, const Schedule& s, const Frame& f, double y,
                      const char* color) {
    out += "  <line x1=\"" + num(f.x0) + "\" y1=\"" + num(y) + "\" x2=\"" + num(f.x0 + f.w) +
           "\" y2=\"" + num(y) + "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    auto qx = [&](double q) { return f.x0 + q / f.ymax * f.w; };
    for (const Segment& seg : s.segments) {
        if (seg.hi <= seg.lo) continue;
        if (seg.kind == SegmentKind::Separating) {
            const double a = seg.quality.at(seg.lo);
            const double b = seg.quality.at(seg.hi);
            out += "  <rect x=\"" + num(qx(a)) + "\" y=\"" + num(y - 4.0) + "\" width=\"" +
                   num(qx(b) - qx(a)) + "\" height=\"8\" fill=\"" + color +
                   "\" fill-opacity=\"0.55\"/>\n";
        } else {
            out += "  <circle cx=\"" + num(qx(seg.quality.value)) + "\" cy=\"" + num(y) +
                   "\" r=\"4\" fill=\"" + color + "\"/>\n";
        }
    }
}

}  // namespace

std::string render_quality_plot(const Schedule& first_best, const Schedule& commitment,
                                const Schedule& limited) {
    const ModelParams& p = limited.params;
    Frame f{70.0, 40.0, 560.0, 330.0, 1.05 / p.c};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"560\" "
           "viewBox=\"0 0 760 560\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"760\" height=\"560\" fill=\"white\"/>\n";

    // axes
    svg += "  <line x1=\"" + num(f.x0) + "\" y1=\"" + num(f.y0 + f.h) + "\" x2=\"" +
           num(f.x0 + f.w) + "\" y2=\"" + num(f.y0 + f.h) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "  <line x1=\"" + num(f.x0) + "\" y1=\"" + num(f.y0) + "\" x2=\"" + num(f.x0) +
           "\" y2=\"" + num(f.y0 + f.h) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double th = i / 4.0;
        svg += "  <text x=\"" + num(f.px(th)) + "\" y=\"" + num(f.y0 + f.h + 18.0) +
               "\" font-size=\"12\" text-anchor=\"middle\">" + num(th) + "</text>\n";
    }
    svg += "  <text x=\"" + num(f.x0 + f.w / 2) + "\" y=\"" + num(f.y0 + f.h + 36.0) +
           "\" font-size=\"13\" text-anchor=\"middle\">type</text>\n";
    svg += "  <text x=\"18\" y=\"" + num(f.y0 + f.h / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           num(f.y0 + f.h / 2) + ")\">quality</text>\n";

    segment_paths(svg, first_best, f, "#000000");
    segment_paths(svg, commitment, f, "#1f4fc8");
    segment_paths(svg, limited, f, "#d62728");

    // legend
    const char* names[3] = {"first best", "commitment", "limited commitment"};
    const char* colors[3] = {"#000000", "#1f4fc8", "#d62728"};
    for (int i = 0; i < 3; ++i) {
        const double ly = f.y0 + 14.0 + 18.0 * i;
        svg += "  <line x1=\"" + num(f.x0 + 12.0) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(f.x0 + 40.0) + "\" y2=\"" + num(ly) + "\" stroke=\"" + colors[i] +
               "\" stroke-width=\"2\"/>\n";
        svg += "  <text x=\"" + num(f.x0 + 46.0) + "\" y=\"" + num(ly + 4.0) +
               "\" font-size=\"12\">" + names[i] + "</text>\n";
    }

    // product lines (offered qualities), first best above limited
    svg += "  <text x=\"" + num(f.x0) + "\" y=\"455\" font-size=\"13\">product line "
           "(offered qualities)</text>\n";
    product_line_bar(svg, first_best, f, 475.0, "#000000");
    product_line_bar(svg, limited, f, 505.0, "#d62728");
    svg += "  <text x=\"" + num(f.x0 + f.w + 8.0) + "\" y=\"479\" font-size=\"11\">first "
           "best</text>\n";
    svg += "  <text x=\"" + num(f.x0 + f.w + 8.0) + "\" y=\"509\" font-size=\"11\">limited</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace prodline
