#include "dlo/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace dlo {

const char* to_string(BenchMethod method) {
    return method == BenchMethod::Scope ? "SCOPE" : "EnergyBased";
}

std::vector<BenchTask> standard_suite() {
    constexpr int kNodes = 15;
    constexpr double kSegment = 0.05;
    constexpr int kSteps = 10;

    // The suite's energy settings favor accuracy: a stiff length term and a
    // dominant shape weight drive the final equilibrium onto the target.
    EnergyOptions energy;
    energy.stretch_stiffness = 1e6;
    energy.bend_stiffness = 1.0;
    energy.lambda = 2e5;

    auto spec = [&](ShapeKind kind, double rotation = 0.0) {
        ShapeSpec s;
        s.kind = kind;
        s.n_nodes = kNodes;
        s.segment_length = kSegment;
        s.rotation = rotation;
        return s;
    };
    auto task = [&](const std::string& name, ShapeSpec a, ShapeSpec b) {
        BenchTask t;
        t.name = name;
        t.start_spec = a;
        t.target_spec = b;
        t.time_steps = kSteps;
        t.energy = energy;
        return t;
    };

    // The L target leans back toward the quarter wave so the corner split is
    // shared between both runs instead of loading one of them.
    const double l_rotation = -35.0 * std::numbers::pi / 180.0;
    return {
        task("QSW-HSW", spec(ShapeKind::QSW), spec(ShapeKind::HSW)),
        task("I-S", spec(ShapeKind::I), spec(ShapeKind::S)),
        task("U-QSW", spec(ShapeKind::U), spec(ShapeKind::QSW)),
        task("QSW-L", spec(ShapeKind::QSW), spec(ShapeKind::L, l_rotation)),
    };
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TaskRun run(const BenchTask& task) {
    if (task.repeats < 1) {
        throw std::invalid_argument("run: repeats must be >= 1");
    }
    if (task.start_spec.n_nodes != task.target_spec.n_nodes ||
        task.start_spec.segment_length != task.target_spec.segment_length) {
        throw std::invalid_argument("run: start and target specs must share N and l_s");
    }
    const Configuration start = generate_shape(task.start_spec);
    const Configuration target = generate_shape(task.target_spec);
    const DloParams params{task.start_spec.n_nodes, task.start_spec.segment_length};

    TaskRun out{
        {task.name, BenchMethod::Scope, 0, 0, 0, 0, 0, "error"},
        {task.name, BenchMethod::EnergyBased, 0, 0, 0, 0, 0, "error"},
        build_guide(start, target, task.time_steps),
        build_guide(start, target, task.time_steps),
    };

    // SCOPE: assembly plus solve, timed together and separately.
    try {
        std::vector<double> times, assembly_times;
        for (int r = 0; r < task.repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            ScopeProblem problem = ScopeProblem::assemble(start, target, params, task.time_steps,
                                                          task.w1, task.w2);
            const auto t1 = std::chrono::steady_clock::now();
            ScopeSolution sol = solve(problem, task.scope_settings);
            const auto t2 = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(t2 - t0).count());
            assembly_times.push_back(std::chrono::duration<double>(t1 - t0).count());
            if (r + 1 == task.repeats) {
                out.scope_trajectory = sol.trajectory;
                out.scope.max_length_error_m = max_length_error(sol.trajectory, params);
                out.scope.final_shape_error_m2 =
                    shape_error(sol.trajectory[sol.trajectory.step_count() - 1], target);
                out.scope.iterations = sol.iterations;
                out.scope.status = to_string(sol.status);
            }
        }
        out.scope.solve_time_s = median(times);
        out.scope.assembly_time_s = median(assembly_times);
    } catch (const std::exception& e) {
        out.scope.status = std::string("error: ") + e.what();
    }

    // Energy baseline: quasi-static stepping over the same scene.
    try {
        const EnergyModel model = EnergyModel::from_rest_shape(
            start, task.energy.stretch_stiffness, task.energy.bend_stiffness,
            task.start_spec.segment_length);
        std::vector<double> times;
        for (int r = 0; r < task.repeats; ++r) {
            TrajectoryResult res = solve_trajectory(start, target, model, task.energy.lambda,
                                                    task.time_steps, task.energy.minimize);
            times.push_back(res.total_time_s);
            if (r + 1 == task.repeats) {
                out.energy_trajectory = res.trajectory;
                out.energy.max_length_error_m = max_length_error(res.trajectory, params);
                out.energy.final_shape_error_m2 =
                    shape_error(res.trajectory[res.trajectory.step_count() - 1], target);
                int iters = 0;
                for (const MinimizeStats& s : res.step_stats) iters += s.iterations;
                out.energy.iterations = iters;
                out.energy.status = res.all_converged ? "Converged" : "MaxIterations";
            }
        }
        out.energy.solve_time_s = median(times);
    } catch (const std::exception& e) {
        out.energy.status = std::string("error: ") + e.what();
    }

    return out;
}

std::string emit_table(const std::vector<TaskRun>& runs) {
    std::string csv = "task,scope_time_s,scope_max_err_m,energy_time_s,energy_max_err_m,speedup\n";
    char buf[256];
    for (const TaskRun& r : runs) {
        const double speedup =
            r.scope.solve_time_s > 0.0 ? r.energy.solve_time_s / r.scope.solve_time_s : 0.0;
        std::snprintf(buf, sizeof(buf), "%s,%.4g,%.4g,%.4g,%.4g,%.4g\n", r.scope.task.c_str(),
                      r.scope.solve_time_s, r.scope.max_length_error_m, r.energy.solve_time_s,
                      r.energy.max_length_error_m, speedup);
        csv += buf;
    }
    return csv;
}

}  // namespace dlo
