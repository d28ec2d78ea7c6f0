#include "dlo/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dlo {

Configuration::Configuration(std::vector<Point2> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw std::invalid_argument("Configuration requires at least 2 nodes, got " +
                                    std::to_string(nodes_.size()));
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!is_finite(nodes_[i])) {
            throw std::invalid_argument("Configuration node " + std::to_string(i) +
                                        " is not finite");
        }
    }
}

Trajectory::Trajectory(std::vector<Configuration> steps) : steps_(std::move(steps)) {
    if (steps_.size() < 2) {
        throw std::invalid_argument("Trajectory requires at least 2 steps, got " +
                                    std::to_string(steps_.size()));
    }
    const std::size_t n = steps_.front().size();
    for (std::size_t t = 1; t < steps_.size(); ++t) {
        if (steps_[t].size() != n) {
            throw std::invalid_argument("Trajectory step " + std::to_string(t) + " has " +
                                        std::to_string(steps_[t].size()) + " nodes, expected " +
                                        std::to_string(n));
        }
    }
}

double arc_length(const Configuration& c) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        total += norm(c[i + 1] - c[i]);
    }
    return total;
}

double max_length_error(const Trajectory& traj, const DloParams& params) {
    if (traj.node_count() != static_cast<std::size_t>(params.n_nodes)) {
        throw std::invalid_argument("max_length_error: trajectory has " +
                                    std::to_string(traj.node_count()) + " nodes, params expect " +
                                    std::to_string(params.n_nodes));
    }
    const double rest = params.total_rest_length();
    double worst = 0.0;
    for (const Configuration& c : traj.steps()) {
        worst = std::max(worst, std::abs(arc_length(c) - rest));
    }
    return worst;
}

std::vector<double> turning_angles(const Configuration& c) {
    if (c.size() < 3) {
        throw std::invalid_argument("turning_angles requires at least 3 nodes");
    }
    std::vector<double> angles;
    angles.reserve(c.size() - 2);
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        const Point2 a = c[i] - c[i - 1];
        const Point2 b = c[i + 1] - c[i];
        if (squared_norm(a) == 0.0 || squared_norm(b) == 0.0) {
            throw std::domain_error("turning_angles: zero-length segment at node " +
                                    std::to_string(i));
        }
        angles.push_back(std::atan2(cross(a, b), dot(a, b)));
    }
    return angles;
}

double shape_error(const Configuration& c, const Configuration& target) {
    if (c.size() != target.size()) {
        throw std::invalid_argument("shape_error: node counts differ (" +
                                    std::to_string(c.size()) + " vs " +
                                    std::to_string(target.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        total += squared_norm(c[i] - target[i]);
    }
    return total;
}

Trajectory build_guide(const Configuration& start, const Configuration& target, int steps) {
    if (start.size() != target.size()) {
        throw std::invalid_argument("build_guide: node counts differ (" +
                                    std::to_string(start.size()) + " vs " +
                                    std::to_string(target.size()) + ")");
    }
    if (steps < 2) {
        throw std::invalid_argument("build_guide: need at least 2 steps, got " +
                                    std::to_string(steps));
    }
    std::vector<Configuration> out;
    out.reserve(steps);
    out.push_back(start);
    for (int t = 1; t + 1 < steps; ++t) {
        const double s = static_cast<double>(t) / (steps - 1);
        std::vector<Point2> nodes;
        nodes.reserve(start.size());
        for (std::size_t i = 0; i < start.size(); ++i) {
            nodes.push_back(start[i] + s * (target[i] - start[i]));
        }
        out.emplace_back(std::move(nodes));
    }
    out.push_back(target);
    return Trajectory(std::move(out));
}

}  // namespace dlo
