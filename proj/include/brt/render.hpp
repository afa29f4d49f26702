#pragma once

#include <map>
#include <string>

#include "brt/tessellation.hpp"

namespace brt {

struct RenderStyle {
    std::map<Colour, std::string> fills;  // one fill per colour label
    double stroke_width = 0.01;
    double canvas_px = 720.0;
    bool time_stamp = false;

    static RenderStyle defaults(std::size_t n_colours);
};

// Deterministic SVG of the tessellation: one filled polygon per cell
// (d=2), or a bar-chart strip of intervals (d=1).
std::string render_svg(const Tessellation& t, const RenderStyle& style, double time);

} // namespace brt
