#ifndef DLO_SCOPE_HPP
#define DLO_SCOPE_HPP

#include <optional>
#include <vector>

#include "dlo/geometry.hpp"

namespace dlo {

// Sum over consecutive steps and all nodes of squared node displacement.
double smoothness_objective(const Trajectory& traj);

// Sum over interior steps (2..T-1) and interior nodes (2..N-1) of squared
// deviation from the guide. Boundary nodes and boundary steps do not count.
double midpoint_objective(const Trajectory& traj, const Trajectory& guide);

// Prescribed positions for the two gripper nodes (node 1 and node N) at the
// interior time steps 2..T-1. When present, those nodes become constants of
// the program instead of free variables.
struct GripperWaypoints {
    std::vector<Point2> first;  // node 1 at t = 2..T-1
    std::vector<Point2> last;   // node N at t = 2..T-1
};

enum class SolveStatus { Converged, MaxIterations, Infeasible };

const char* to_string(SolveStatus status);

struct SolverSettings {
    int max_iterations = 50000;
    double primal_tolerance = 1e-6;  // meters
    double dual_tolerance = 1e-6;
    double penalty_rho = 1.0;
    double over_relaxation = 1.6;  // in [1, 1.8]
    // Start the iteration from the guide trajectory or from all-zero
    // interior positions. Both reach the same optimum (the program is
    // convex); the guide is usually much closer.
    enum class Init { Guide, Zero } init = Init::Guide;
    bool record_residuals = false;  // keep per-iteration residual history
};

struct ScopeSolution {
    Trajectory trajectory;
    double objective_value = 0.0;
    int iterations = 0;
    double max_constraint_violation = 0.0;  // meters beyond l_0, over all segments/steps
    SolveStatus status = SolveStatus::Converged;
    double solve_time_s = 0.0;
    std::vector<double> residual_history;  // filled when settings.record_residuals
};

// The assembled convex program:
//
//   minimize    w1 * S_obj + w2 * M_obj
//   subject to  trajectory[1]   = start
//               trajectory[T]   = target
//               |p(i+1,t) - p(i,t)| <= l_0   for all segments i, steps t
//
// Boundary steps (and pinned gripper waypoints, when given) are eliminated as
// constants, so the returned trajectory reproduces them exactly.
class ScopeProblem {
  public:
    static ScopeProblem assemble(const Configuration& start, const Configuration& target,
                                 const DloParams& params, int time_steps, double w1, double w2,
                                 std::optional<Trajectory> guide = std::nullopt,
                                 std::optional<GripperWaypoints> waypoints = std::nullopt);

    const Configuration& start() const { return guide_[0]; }
    const Configuration& target() const { return guide_[guide_.step_count() - 1]; }
    const Trajectory& guide() const { return guide_; }
    const DloParams& params() const { return params_; }
    int time_steps() const { return time_steps_; }
    double w1() const { return w1_; }
    double w2() const { return w2_; }
    const std::optional<GripperWaypoints>& waypoints() const { return waypoints_; }

    // Program size introspection.
    int variable_count() const;         // scalar decision variables, 2*N*T
    int cone_constraint_count() const;  // one per (segment, step), (N-1)*T
    int equality_count() const;         // scalar boundary equalities, 4*N

    // J = w1 * S_obj + w2 * M_obj evaluated on any candidate trajectory.
    double objective_value(const Trajectory& traj) const;

  private:
    ScopeProblem(Trajectory guide, DloParams params, int time_steps, double w1, double w2,
                 std::optional<GripperWaypoints> waypoints);

    Trajectory guide_;
    DloParams params_;
    int time_steps_;
    double w1_;
    double w2_;
    std::optional<GripperWaypoints> waypoints_;
};

// ADMM solve: splits each segment vector against a radius-l_0 ball, solving a
// fixed sparse SPD system for the position update (factorized once).
// Deterministic for identical inputs and settings.
ScopeSolution solve(const ScopeProblem& problem, const SolverSettings& settings = {});

}  // namespace dlo

#endif  // DLO_SCOPE_HPP
