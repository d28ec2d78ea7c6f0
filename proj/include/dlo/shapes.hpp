#ifndef DLO_SHAPES_HPP
#define DLO_SHAPES_HPP

#include <string>

#include "dlo/geometry.hpp"

namespace dlo {

// Canonical test-shape families.
//
//   I    straight segment
//   L    two perpendicular straight runs, corner at a node
//   QSW  quarter sine wave (the rising quarter, y = A*(1 - cos(pi*x/(2W))))
//   HSW  half sine wave arch (y = A*sin(pi*x/W))
//   S    full sine period (y = A*sin(2*pi*x/W))
//   U    circular arc opening upward
enum class ShapeKind { QSW, HSW, U, S, I, L };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

struct ShapeSpec {
    ShapeKind kind = ShapeKind::I;
    int n_nodes = 15;
    double segment_length = 0.05;  // meters
    Point2 origin = {0.0, 0.0};    // node 1 lands here
    double rotation = 0.0;         // radians, CCW about node 1
};

// Builds the shape as a polyline whose every segment has length
// `spec.segment_length` to within 1e-9 m, with node 1 at `spec.origin` and the
// whole shape rotated by `spec.rotation`. Curved families are produced by
// marching equal chords along a densely sampled parametric curve whose overall
// scale is solved so the final node lands on the curve endpoint; the polyline
// arc length is therefore exactly (n_nodes - 1) * segment_length.
Configuration generate_shape(const ShapeSpec& spec);

}  // namespace dlo

#endif  // DLO_SHAPES_HPP
