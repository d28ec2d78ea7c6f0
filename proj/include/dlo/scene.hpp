#ifndef DLO_SCENE_HPP
#define DLO_SCENE_HPP

#include <string>

#include "dlo/bench.hpp"
#include "dlo/geometry.hpp"
#include "dlo/scope.hpp"
#include "dlo/shapes.hpp"

namespace dlo {

// One planning scene, as read from a scene JSON file:
//
//   {
//     "n_nodes": 15, "segment_length": 0.05,
//     "start":  {"kind": "QSW", "origin": [0, 0], "rotation": 0},
//     "target": {"kind": "HSW", "origin": [0, 0], "rotation": 0},
//     "T": 10, "w1": 1.0, "w2": 0.1,
//     "energy": {"k_s": 100, "k_b": 1, "lambda": 10}   // optional
//   }
struct Scene {
    int n_nodes = 15;
    double segment_length = 0.05;
    ShapeSpec start;
    ShapeSpec target;
    int time_steps = 10;
    double w1 = 1.0;
    double w2 = 0.1;
    EnergyOptions energy;

    DloParams params() const { return {n_nodes, segment_length}; }
};

// Throws std::runtime_error with a line:column diagnostic on malformed JSON,
// std::invalid_argument on schema/validation problems.
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& text);

// Trajectory payloads serialize as [T][N][2] arrays of coordinates.
std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json_text(const std::string& text);
Trajectory load_trajectory(const std::string& path);

// Full solution document:
// { "status", "objective", "iterations", "solve_time_s",
//   "max_constraint_violation", "trajectory": [T][N][2] }
std::string solution_to_json(const ScopeSolution& solution);

// Same document shape for the energy baseline's trajectory.
std::string energy_solution_to_json(const Trajectory& traj, double objective, int iterations,
                                    double solve_time_s, double max_violation,
                                    bool converged);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace dlo

#endif  // DLO_SCENE_HPP
