#include "dlo/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace dlo {

namespace {

bool valid_hex_color(const std::string& c) {
    if ((c.size() != 7 && c.size() != 4) || c[0] != '#') return false;
    return std::all_of(c.begin() + 1, c.end(),
                       [](unsigned char ch) { return std::isxdigit(ch) != 0; });
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

void validate(const RenderStyle& style) {
    if (style.canvas_size <= 0) {
        throw std::invalid_argument("render style: canvas_size must be positive");
    }
    if (style.margin < 0 || 2 * style.margin >= style.canvas_size) {
        throw std::invalid_argument("render style: margin must fit inside the canvas");
    }
    if (!(style.stroke_width > 0.0)) {
        throw std::invalid_argument("render style: stroke_width must be positive");
    }
    for (const std::string* c : {&style.start_color, &style.target_color,
                                 &style.intermediate_color}) {
        if (!valid_hex_color(*c)) {
            throw std::invalid_argument("render style: '" + *c + "' is not a hex color");
        }
    }
}

std::string render_svg(const std::vector<Trajectory>& trajectories, const RenderStyle& style) {
    validate(style);
    if (trajectories.empty()) {
        throw std::invalid_argument("render_svg: need at least one trajectory");
    }
    const std::size_t n = trajectories.front().node_count();
    for (const Trajectory& t : trajectories) {
        if (t.node_count() != n) {
            throw std::invalid_argument("render_svg: trajectories have mismatched node counts");
        }
    }

    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (const Trajectory& t : trajectories) {
        for (const Configuration& c : t.steps()) {
            for (const Point2& p : c.nodes()) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
        }
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double usable = style.canvas_size - 2.0 * style.margin;
    const double scale = usable / span;
    // center the bounding box; SVG's y axis points down
    const double off_x = style.margin + 0.5 * (usable - (max_x - min_x) * scale);
    const double off_y = style.margin + 0.5 * (usable - (max_y - min_y) * scale);
    auto to_px = [&](Point2 p) {
        return Point2{off_x + (p.x - min_x) * scale, off_y + (max_y - p.y) * scale};
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(style.canvas_size) + "\" height=\"" +
           std::to_string(style.canvas_size) + "\" viewBox=\"0 0 " +
           std::to_string(style.canvas_size) + " " + std::to_string(style.canvas_size) + "\">\n";

    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const Trajectory& traj = trajectories[k];
        const std::size_t steps = traj.step_count();
        const bool dashed = k > 0;
        svg += "  <g fill=\"none\" stroke-width=\"" + fmt(style.stroke_width) + "\"";
        if (dashed) {
            svg += " stroke-dasharray=\"" + style.baseline_dash_pattern + "\"";
        }
        svg += ">\n";
        for (std::size_t t = 0; t < steps; ++t) {
            std::string color = style.intermediate_color;
            std::string opacity = "1.000";
            if (t == 0) {
                color = style.start_color;
            } else if (t + 1 == steps) {
                color = style.target_color;
            } else if (steps > 2) {
                // fade the morph in over time
                const double w = static_cast<double>(t) / (steps - 1);
                opacity = fmt(0.25 + 0.6 * w);
            }
            svg += "    <polyline stroke=\"" + color + "\" stroke-opacity=\"" + opacity +
                   "\" points=\"";
            for (std::size_t i = 0; i < n; ++i) {
                const Point2 px = to_px(traj[t][i]);
                if (i) svg += " ";
                svg += fmt(px.x) + "," + fmt(px.y);
            }
            svg += "\"/>\n";
        }
        svg += "  </g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace dlo
