#include "brt/render.hpp"

#include <cstdio>
#include <sstream>

namespace brt {

namespace {

const char* kPalette[] = {"#4878cf", "#d65f5f", "#6acc65", "#b47cc7",
                          "#c4ad66", "#77bedb", "#f0e442", "#999999"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

RenderStyle RenderStyle::defaults(std::size_t n_colours) {
    RenderStyle s;
    for (std::size_t i = 0; i < n_colours; ++i)
        s.fills[static_cast<Colour>(i)] = kPalette[i % (sizeof(kPalette) / sizeof(char*))];
    return s;
}

std::string render_svg(const Tessellation& t, const RenderStyle& style, double time) {
    auto [mn, mx] = t.window.bounding_box();
    const bool flat = t.window.dim() == 1;
    const double strip = flat ? 0.2 * (mx.x - mn.x) : 0.0;
    const double w = mx.x - mn.x;
    const double h = flat ? strip : mx.y - mn.y;
    const double scale = style.canvas_px / w;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w * scale)
        << "\" height=\"" << fmt(h * scale) << "\" viewBox=\"" << fmt(mn.x) << " "
        << fmt(flat ? 0.0 : mn.y) << " " << fmt(w) << " " << fmt(h) << "\">\n";
    // svg y grows downwards; flip into the usual orientation
    out << "<g transform=\"translate(0," << fmt(flat ? strip : mn.y + mx.y)
        << ") scale(1,-1)\">\n";
    const std::string stroke = fmt(style.stroke_width);
    for (const Cell& c : t.cells) {
        const auto it = style.fills.find(c.colour);
        const std::string fill = it != style.fills.end() ? it->second : "#cccccc";
        if (flat) {
            out << "<rect x=\"" << fmt(c.poly.lo) << "\" y=\"" << fmt(0.25 * strip)
                << "\" width=\"" << fmt(c.poly.hi - c.poly.lo) << "\" height=\""
                << fmt(0.5 * strip) << "\" fill=\"" << fill
                << "\" stroke=\"black\" stroke-width=\"" << stroke << "\"/>\n";
        } else {
            out << "<polygon points=\"";
            for (std::size_t i = 0; i < c.poly.verts.size(); ++i) {
                if (i)
                    out << " ";
                out << fmt(c.poly.verts[i].x) << "," << fmt(c.poly.verts[i].y);
            }
            out << "\" fill=\"" << fill << "\" stroke=\"black\" stroke-width=\"" << stroke
                << "\"/>\n";
        }
    }
    out << "</g>\n";
    if (style.time_stamp) {
        out << "<text x=\"" << fmt(mn.x + 0.02 * w) << "\" y=\""
            << fmt((flat ? 0.0 : mn.y) + 0.06 * h) << "\" font-size=\"" << fmt(0.05 * h)
            << "\">t=" << fmt(time) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace brt
