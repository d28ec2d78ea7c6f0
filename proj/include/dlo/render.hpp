#ifndef DLO_RENDER_HPP
#define DLO_RENDER_HPP

#include <string>
#include <vector>

#include "dlo/geometry.hpp"

namespace dlo {

// Figure styling: initial shape in the start color, goal shape in the target
// color, intermediate steps in the intermediate color with opacity graded by
// time step; the second trajectory (the baseline overlay) is dashed.
struct RenderStyle {
    std::string start_color = "#d62728";         // red
    std::string target_color = "#1f77b4";        // blue
    std::string intermediate_color = "#2ca02c";  // green
    std::string baseline_dash_pattern = "6,4";
    int canvas_size = 800;  // pixels, square
    int margin = 40;        // pixels
    double stroke_width = 2.0;
};

// Throws std::invalid_argument on malformed colors or sizes.
void validate(const RenderStyle& style);

// One SVG overlaying the given trajectories (same node count required). The
// first trajectory draws solid, later ones dashed. Output is byte-identical
// for identical inputs and style.
std::string render_svg(const std::vector<Trajectory>& trajectories, const RenderStyle& style = {});

}  // namespace dlo

#endif  // DLO_RENDER_HPP
