#ifndef DLO_ENERGY_HPP
#define DLO_ENERGY_HPP

#include <utility>
#include <vector>

#include "dlo/geometry.hpp"

namespace dlo {

// Mass-spring model of one rope: stretch stiffness per segment, bend stiffness
// per interior node, and the reference geometry both are measured against.
struct EnergyModel {
    double stretch_stiffness = 100.0;    // k_s, energy / m^2
    double bend_stiffness = 1.0;         // k_b, energy / rad^2
    double segment_rest_length = 0.05;   // l_s, meters
    std::vector<double> rest_angles;     // turning angles of the rest shape, N-2 entries

    // Model whose rest angles are taken from `rest_shape` (its current
    // turning angles), so that shape has zero internal energy.
    static EnergyModel from_rest_shape(const Configuration& rest_shape, double k_s, double k_b,
                                       double l_s);
};

struct EnergyReport {
    double stretch_total = 0.0;  // energy
    double bend_total = 0.0;     // energy
    double shape_term = 0.0;     // meters^2
    double objective = 0.0;      // stretch + bend + lambda * shape_term
};

// Sum over segments of (k_s / 2) * (|segment| - l_s)^2.
double stretch_energy(const Configuration& c, const EnergyModel& model);

// Sum over interior nodes of (k_b / 2) * (angle - rest angle)^2.
// Throws on zero-length segments (angles undefined).
double bend_energy(const Configuration& c, const EnergyModel& model);

// Total internal energy and its exact gradient with respect to every node
// coordinate (N entries of energy / m).
std::pair<double, std::vector<Point2>> internal_energy_and_gradient(const Configuration& c,
                                                                    const EnergyModel& model);

struct MinimizeOptions {
    // Gradient-norm stopping threshold; <= 0 selects the scale-relative
    // default 1e-8 * (k_s + k_b).
    double grad_tol = 0.0;
    int max_iterations = 10000;
    bool pin_endpoints = true;  // grippers hold node 1 and node N at the target's endpoints
    // Quasi-second-order acceleration from limited-memory curvature pairs;
    // plain gradient descent with Armijo backtracking when off.
    bool accelerate = false;
    int history = 8;  // curvature pairs kept when accelerating
};

struct MinimizeStats {
    int iterations = 0;
    int evaluations = 0;      // objective/gradient evaluations including line search
    bool converged = false;
    double grad_norm = 0.0;   // at the returned iterate
    double solve_time_s = 0.0;
};

struct EquilibriumResult {
    Configuration shape;
    EnergyReport report;
    MinimizeStats stats;
};

// Local minimizer of J = E_internal + lambda * shape_error(c, target),
// started from `start`. With pinning on, the endpoint nodes are held at the
// target's endpoints and excluded from the descent.
EquilibriumResult solve_equilibrium(const Configuration& start, const Configuration& target,
                                    const EnergyModel& model, double lambda,
                                    const MinimizeOptions& opts = {});

struct TrajectoryResult {
    Trajectory trajectory;
    std::vector<MinimizeStats> step_stats;  // one entry per solved step (t = 2..T)
    double total_time_s = 0.0;
    bool all_converged = true;
};

// Quasi-static stepping: step t is the equilibrium for the linear-guide shape
// at step t, warm-started from step t-1. Step 1 is `start` itself.
TrajectoryResult solve_trajectory(const Configuration& start, const Configuration& target,
                                  const EnergyModel& model, double lambda, int time_steps,
                                  const MinimizeOptions& opts = {});

}  // namespace dlo

#endif  // DLO_ENERGY_HPP
