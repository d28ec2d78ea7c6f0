#include "dlo/scope.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dlo {

double smoothness_objective(const Trajectory& traj) {
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < traj.step_count(); ++t) {
        for (std::size_t i = 0; i < traj.node_count(); ++i) {
            total += squared_norm(traj[t + 1][i] - traj[t][i]);
        }
    }
    return total;
}

double midpoint_objective(const Trajectory& traj, const Trajectory& guide) {
    if (traj.step_count() != guide.step_count() || traj.node_count() != guide.node_count()) {
        throw std::invalid_argument("midpoint_objective: trajectory/guide dimensions differ");
    }
    double total = 0.0;
    for (std::size_t t = 1; t + 1 < traj.step_count(); ++t) {
        for (std::size_t i = 1; i + 1 < traj.node_count(); ++i) {
            total += squared_norm(traj[t][i] - guide[t][i]);
        }
    }
    return total;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIterations: return "MaxIterations";
        case SolveStatus::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

ScopeProblem::ScopeProblem(Trajectory guide, DloParams params, int time_steps, double w1,
                           double w2, std::optional<GripperWaypoints> waypoints)
    : guide_(std::move(guide)),
      params_(params),
      time_steps_(time_steps),
      w1_(w1),
      w2_(w2),
      waypoints_(std::move(waypoints)) {}

ScopeProblem ScopeProblem::assemble(const Configuration& start, const Configuration& target,
                                    const DloParams& params, int time_steps, double w1, double w2,
                                    std::optional<Trajectory> guide,
                                    std::optional<GripperWaypoints> waypoints) {
    const std::size_t n = static_cast<std::size_t>(params.n_nodes);
    if (start.size() != n || target.size() != n) {
        throw std::invalid_argument("assemble: start/target node counts must equal params.n_nodes");
    }
    if (time_steps < 2) {
        throw std::invalid_argument("assemble: need at least 2 time steps");
    }
    if (w1 < 0.0 || w2 < 0.0 || w1 + w2 <= 0.0) {
        throw std::invalid_argument("assemble: weights must be nonnegative with w1 + w2 > 0");
    }
    const double l0 = params.segment_rest_length;

    auto check_boundary = [&](const Configuration& c, const char* which) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            const double len = norm(c[i + 1] - c[i]);
            if (len > l0 + 1e-9) {
                throw std::invalid_argument(std::string(which) + " configuration segment " +
                                            std::to_string(i + 1) + " has length " +
                                            std::to_string(len) + " exceeding rest length " +
                                            std::to_string(l0));
            }
        }
    };
    check_boundary(start, "start");
    check_boundary(target, "target");

    if (guide) {
        if (guide->step_count() != static_cast<std::size_t>(time_steps) ||
            guide->node_count() != n) {
            throw std::invalid_argument("assemble: guide dimensions must be T steps of N nodes");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 d0 = (*guide)[0][i] - start[i];
            const Point2 dT = (*guide)[guide->step_count() - 1][i] - target[i];
            if (std::abs(d0.x) > 1e-9 || std::abs(d0.y) > 1e-9 || std::abs(dT.x) > 1e-9 ||
                std::abs(dT.y) > 1e-9) {
                throw std::invalid_argument(
                    "assemble: guide boundary steps must match start/target");
            }
        }
        // normalize the boundary steps to the exact inputs
        std::vector<Configuration> steps = guide->steps();
        steps.front() = start;
        steps.back() = target;
        guide = Trajectory(std::move(steps));
    } else {
        guide = build_guide(start, target, time_steps);
    }

    if (waypoints) {
        const std::size_t interior = static_cast<std::size_t>(time_steps - 2);
        if (waypoints->first.size() != interior || waypoints->last.size() != interior) {
            throw std::invalid_argument("assemble: waypoints must cover steps 2..T-1 (" +
                                        std::to_string(interior) + " entries per gripper)");
        }
        for (std::size_t k = 0; k < interior; ++k) {
            if (!is_finite(waypoints->first[k]) || !is_finite(waypoints->last[k])) {
                throw std::invalid_argument("assemble: waypoint at step " + std::to_string(k + 2) +
                                            " is not finite");
            }
            const double chord = norm(waypoints->last[k] - waypoints->first[k]);
            if (chord > (n - 1) * l0 + 1e-9) {
                throw std::invalid_argument("assemble: gripper waypoints at step " +
                                            std::to_string(k + 2) + " are " +
                                            std::to_string(chord) +
                                            " apart, beyond total rest length");
            }
        }
    }

    return ScopeProblem(std::move(*guide), params, time_steps, w1, w2, std::move(waypoints));
}

int ScopeProblem::variable_count() const { return 2 * params_.n_nodes * time_steps_; }

int ScopeProblem::cone_constraint_count() const {
    return (params_.n_nodes - 1) * time_steps_;
}

int ScopeProblem::equality_count() const { return 4 * params_.n_nodes; }

double ScopeProblem::objective_value(const Trajectory& traj) const {
    if (traj.step_count() != static_cast<std::size_t>(time_steps_) ||
        traj.node_count() != static_cast<std::size_t>(params_.n_nodes)) {
        throw std::invalid_argument("objective_value: trajectory dimensions do not match problem");
    }
    return w1_ * smoothness_objective(traj) + w2_ * midpoint_objective(traj, guide_);
}

namespace {

struct Grid {
    int n = 0;
    int steps = 0;
    std::vector<int> free_id;        // (i, t) -> free variable index or -1
    std::vector<Point2> fixed_value;  // valid where free_id < 0
    int free_count = 0;

    int at(int i, int t) const { return free_id[static_cast<std::size_t>(t) * n + i]; }
    Point2 fixed(int i, int t) const { return fixed_value[static_cast<std::size_t>(t) * n + i]; }
};

Grid layout_grid(const ScopeProblem& p) {
    Grid g;
    g.n = p.params().n_nodes;
    g.steps = p.time_steps();
    g.free_id.assign(static_cast<std::size_t>(g.n) * g.steps, -1);
    g.fixed_value.assign(static_cast<std::size_t>(g.n) * g.steps, Point2{});
    for (int t = 0; t < g.steps; ++t) {
        for (int i = 0; i < g.n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(t) * g.n + i;
            const bool boundary_step = (t == 0 || t == g.steps - 1);
            const bool pinned = p.waypoints() && !boundary_step && (i == 0 || i == g.n - 1);
            if (boundary_step) {
                g.fixed_value[idx] = (t == 0) ? p.start()[i] : p.target()[i];
            } else if (pinned) {
                g.fixed_value[idx] =
                    (i == 0) ? p.waypoints()->first[t - 1] : p.waypoints()->last[t - 1];
            } else {
                g.free_id[idx] = g.free_count++;
            }
        }
    }
    return g;
}

Trajectory grid_to_trajectory(const Grid& g, const Eigen::MatrixX2d& z) {
    std::vector<Configuration> steps;
    steps.reserve(g.steps);
    for (int t = 0; t < g.steps; ++t) {
        std::vector<Point2> nodes;
        nodes.reserve(g.n);
        for (int i = 0; i < g.n; ++i) {
            const int v = g.at(i, t);
            nodes.push_back(v >= 0 ? Point2{z(v, 0), z(v, 1)} : g.fixed(i, t));
        }
        steps.emplace_back(std::move(nodes));
    }
    return Trajectory(std::move(steps));
}

double trajectory_violation(const Trajectory& traj, double l0) {
    double worst = 0.0;
    for (const Configuration& c : traj.steps()) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            worst = std::max(worst, norm(c[i + 1] - c[i]) - l0);
        }
    }
    return std::max(worst, 0.0);
}

}  // namespace

ScopeSolution solve(const ScopeProblem& problem, const SolverSettings& settings) {
    if (settings.max_iterations < 1 || settings.primal_tolerance <= 0.0 ||
        settings.dual_tolerance <= 0.0 || settings.penalty_rho <= 0.0) {
        throw std::invalid_argument("solve: invalid solver settings");
    }
    if (settings.over_relaxation < 1.0 || settings.over_relaxation > 1.8) {
        throw std::invalid_argument("solve: over_relaxation must lie in [1, 1.8]");
    }
    const auto t_begin = std::chrono::steady_clock::now();
    const double l0 = problem.params().segment_rest_length;
    const double w1 = problem.w1();
    const double w2 = problem.w2();
    const Grid grid = layout_grid(problem);
    const int n = grid.n;
    const int steps = grid.steps;
    const int nv = grid.free_count;

    auto finish = [&](Trajectory traj, int iterations, SolveStatus status,
                      std::vector<double> residuals) {
        ScopeSolution sol{std::move(traj), 0.0, iterations, 0.0, status, 0.0,
                          std::move(residuals)};
        sol.objective_value = problem.objective_value(sol.trajectory);
        sol.max_constraint_violation = trajectory_violation(sol.trajectory, l0);
        sol.solve_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
        return sol;
    };

    if (nv == 0) {
        // T == 2 (or everything pinned): the trajectory is fully determined.
        return finish(grid_to_trajectory(grid, Eigen::MatrixX2d(0, 2)), 0,
                      SolveStatus::Converged, {});
    }

    // Quadratic part J(z) = z^T A z - 2 b^T z + const, per coordinate.
    std::vector<Eigen::Triplet<double>> a_trips;
    Eigen::MatrixX2d b = Eigen::MatrixX2d::Zero(nv, 2);
    auto add_b = [&](int v, double w, Point2 val) {
        b(v, 0) += w * val.x;
        b(v, 1) += w * val.y;
    };
    // smoothness couplings along each node's time chain
    for (int t = 0; t + 1 < steps; ++t) {
        for (int i = 0; i < n; ++i) {
            const int va = grid.at(i, t);
            const int vb = grid.at(i, t + 1);
            if (va < 0 && vb < 0) continue;
            if (va < 0) {
                a_trips.emplace_back(vb, vb, w1);
                add_b(vb, w1, grid.fixed(i, t));
            } else if (vb < 0) {
                a_trips.emplace_back(va, va, w1);
                add_b(va, w1, grid.fixed(i, t + 1));
            } else {
                a_trips.emplace_back(va, va, w1);
                a_trips.emplace_back(vb, vb, w1);
                a_trips.emplace_back(va, vb, -w1);
                a_trips.emplace_back(vb, va, -w1);
            }
        }
    }
    // midpoint pull toward the guide at interior nodes and steps
    if (w2 > 0.0) {
        for (int t = 1; t + 1 < steps; ++t) {
            for (int i = 1; i + 1 < n; ++i) {
                const int v = grid.at(i, t);
                if (v < 0) continue;
                a_trips.emplace_back(v, v, w2);
                add_b(v, w2, problem.guide()[t][i]);
            }
        }
    }

    // Cone rows: one per segment with at least one free endpoint.
    struct SegRow {
        int va;      // free id of node i, or -1
        int vb;      // free id of node i+1, or -1
        Point2 off;  // contribution of fixed endpoints to p(i+1) - p(i)
    };
    std::vector<SegRow> segs;
    for (int t = 0; t < steps; ++t) {
        for (int i = 0; i + 1 < n; ++i) {
            const int va = grid.at(i, t);
            const int vb = grid.at(i + 1, t);
            if (va < 0 && vb < 0) continue;  // constant segment, validated at assembly
            Point2 off{0.0, 0.0};
            if (va < 0) off = off - grid.fixed(i, t);
            if (vb < 0) off = off + grid.fixed(i + 1, t);
            segs.push_back({va, vb, off});
        }
    }
    const int m = static_cast<int>(segs.size());

    const double rho = settings.penalty_rho;
    std::vector<Eigen::Triplet<double>> d_trips;
    std::vector<Eigen::Triplet<double>> k_trips;
    k_trips.reserve(2 * a_trips.size() + 4 * segs.size());
    for (const Eigen::Triplet<double>& t : a_trips) {
        k_trips.emplace_back(t.row(), t.col(), 2.0 * t.value());
    }
    Eigen::MatrixX2d e = Eigen::MatrixX2d::Zero(m, 2);
    for (int k = 0; k < m; ++k) {
        const int va = segs[k].va;
        const int vb = segs[k].vb;
        if (va >= 0) {
            d_trips.emplace_back(k, va, -1.0);
            k_trips.emplace_back(va, va, rho);
        }
        if (vb >= 0) {
            d_trips.emplace_back(k, vb, 1.0);
            k_trips.emplace_back(vb, vb, rho);
        }
        if (va >= 0 && vb >= 0) {
            k_trips.emplace_back(va, vb, -rho);
            k_trips.emplace_back(vb, va, -rho);
        }
        e(k, 0) = segs[k].off.x;
        e(k, 1) = segs[k].off.y;
    }
    Eigen::SparseMatrix<double> D(m, nv);
    D.setFromTriplets(d_trips.begin(), d_trips.end());
    const Eigen::SparseMatrix<double> Dt = D.transpose();

    Eigen::SparseMatrix<double> K(nv, nv);
    K.setFromTriplets(k_trips.begin(), k_trips.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(K);
    if (ldlt.info() != Eigen::Success) {
        // K can lose strict definiteness for degenerate weight/size combos;
        // a proximal diagonal keeps the iteration valid.
        Eigen::SparseMatrix<double> reg(nv, nv);
        reg.setIdentity();
        K = K + (1e-10 * (rho + w1 + w2)) * reg;
        ldlt.compute(K);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("solve: failed to factorize the position-update system");
        }
    }

    // Initial iterate.
    Eigen::MatrixX2d z(nv, 2);
    if (settings.init == SolverSettings::Init::Guide) {
        for (int t = 1; t + 1 < steps; ++t) {
            for (int i = 0; i < n; ++i) {
                const int v = grid.at(i, t);
                if (v < 0) continue;
                z(v, 0) = problem.guide()[t][i].x;
                z(v, 1) = problem.guide()[t][i].y;
            }
        }
    } else {
        z.setZero();
    }

    auto project_rows = [&](Eigen::MatrixX2d& mat) {
        for (int k = 0; k < mat.rows(); ++k) {
            const double len = std::hypot(mat(k, 0), mat(k, 1));
            if (len > l0) {
                const double s = l0 / len;
                mat(k, 0) *= s;
                mat(k, 1) *= s;
            }
        }
    };

    Eigen::MatrixX2d d = D * z + e;
    project_rows(d);
    Eigen::MatrixX2d u = Eigen::MatrixX2d::Zero(m, 2);

    const double alpha = settings.over_relaxation;
    std::vector<double> residuals;
    int it = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    double stall_best = std::numeric_limits<double>::infinity();
    int stall_counter = 0;

    Eigen::MatrixX2d rhs(nv, 2), Dz(m, 2), h(m, 2), w(m, 2), d_new(m, 2);
    for (it = 1; it <= settings.max_iterations; ++it) {
        rhs = 2.0 * b + rho * (Dt * (d - u - e));
        z = ldlt.solve(rhs);
        Dz = D * z + e;
        h = alpha * Dz + (1.0 - alpha) * d;
        w = h + u;
        d_new = w;
        project_rows(d_new);
        u += h - d_new;

        const double r_primal = (Dz - d_new).rowwise().norm().maxCoeff();
        const double r_dual = rho * (Dt * (d_new - d)).cwiseAbs().maxCoeff();
        d.swap(d_new);
        if (settings.record_residuals) {
            residuals.push_back(r_primal + r_dual);
        }
        if (r_primal <= settings.primal_tolerance && r_dual <= settings.dual_tolerance) {
            status = SolveStatus::Converged;
            break;
        }
        // Stagnation guard: a primal residual that stops improving far above
        // tolerance indicates the cones and pins admit no common point.
        if (r_primal < stall_best * (1.0 - 1e-3)) {
            stall_best = r_primal;
            stall_counter = 0;
        } else if (++stall_counter >= 2000 && r_primal > 1e3 * settings.primal_tolerance) {
            status = SolveStatus::Infeasible;
            break;
        }
    }
    if (status == SolveStatus::MaxIterations) {
        it = settings.max_iterations;
    }

    ScopeSolution sol = finish(grid_to_trajectory(grid, z), it, status, std::move(residuals));
    if (status == SolveStatus::Converged &&
        sol.max_constraint_violation > settings.primal_tolerance) {
        sol.status = SolveStatus::MaxIterations;  // do not certify an infeasible iterate
    }
    return sol;
}

}  // namespace dlo
