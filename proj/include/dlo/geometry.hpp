#ifndef DLO_GEOMETRY_HPP
#define DLO_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace dlo {

// Planar point, meters.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Rotate p by angle (radians, CCW) about the origin.
inline Point2 rotated(Point2 p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// One DLO shape at one instant: an ordered polyline of N >= 2 finite nodes.
class Configuration {
  public:
    explicit Configuration(std::vector<Point2> nodes);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<Point2>& nodes() const { return nodes_; }
    const Point2& operator[](std::size_t i) const { return nodes_[i]; }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.nodes_ == b.nodes_;
    }

  private:
    std::vector<Point2> nodes_;
};

// T >= 2 configurations sharing a node count, indexed by time step.
class Trajectory {
  public:
    explicit Trajectory(std::vector<Configuration> steps);

    std::size_t step_count() const { return steps_.size(); }
    std::size_t node_count() const { return steps_.front().size(); }
    const std::vector<Configuration>& steps() const { return steps_; }
    const Configuration& operator[](std::size_t t) const { return steps_[t]; }

  private:
    std::vector<Configuration> steps_;
};

// Discretization of one rope: node count and rest length per segment.
struct DloParams {
    int n_nodes = 15;
    double segment_rest_length = 0.05;  // l_0, meters

    double total_rest_length() const { return (n_nodes - 1) * segment_rest_length; }
};

// Sum of segment lengths.
double arc_length(const Configuration& c);

// Largest deviation of any step's arc length from the rope's rest length.
double max_length_error(const Trajectory& traj, const DloParams& params);

// Signed CCW turning angle at each interior node, in (-pi, pi].
// Throws on a zero-length segment (the angle is undefined there).
std::vector<double> turning_angles(const Configuration& c);

// Sum of squared node distances between two configurations of equal size.
double shape_error(const Configuration& c, const Configuration& target);

// Per-node linear interpolation from start to target over `steps` time steps.
// Step 1 and step `steps` reproduce the inputs exactly.
Trajectory build_guide(const Configuration& start, const Configuration& target, int steps);

}  // namespace dlo

#endif  // DLO_GEOMETRY_HPP
