// Command-line front end: plan a single scene, run the benchmark suite, or
// render trajectory files to SVG.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dlo/bench.hpp"
#include "dlo/energy.hpp"
#include "dlo/render.hpp"
#include "dlo/scene.hpp"
#include "dlo/scope.hpp"
#include "dlo/shapes.hpp"

namespace {

struct PlanArgs {
    std::string scene_path;
    std::string method = "scope";
    std::string out = "trajectory.json";
    double rho = 1.0;
    double tol = 1e-6;
    int max_iters = 50000;
    std::string init = "guide";
};

struct BenchArgs {
    std::string suite = "standard";
    std::string scene_path;
    int repeats = 5;
    std::string out_csv;
    std::string out_json;
};

struct RenderArgs {
    std::vector<std::string> trajectory_paths;
    std::string out = "figure.svg";
    dlo::RenderStyle style;
};

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const std::string ext = ".json";
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
        return path.substr(0, path.size() - ext.size()) + suffix;
    }
    return path + suffix;
}

double trajectory_violation(const dlo::Trajectory& traj, double l0) {
    double worst = 0.0;
    for (const dlo::Configuration& c : traj.steps()) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            worst = std::max(worst, dlo::norm(c[i + 1] - c[i]) - l0);
        }
    }
    return std::max(worst, 0.0);
}

int run_plan(const PlanArgs& args) {
    const dlo::Scene scene = dlo::load_scene(args.scene_path);
    const dlo::Configuration start = dlo::generate_shape(scene.start);
    const dlo::Configuration target = dlo::generate_shape(scene.target);
    const dlo::DloParams params = scene.params();

    const bool want_scope = args.method == "scope" || args.method == "both";
    const bool want_energy = args.method == "energy" || args.method == "both";
    if (!want_scope && !want_energy) {
        throw std::invalid_argument("--method must be scope, energy, or both");
    }
    int exit_code = 0;

    if (want_scope) {
        dlo::SolverSettings settings;
        settings.penalty_rho = args.rho;
        settings.primal_tolerance = args.tol;
        settings.dual_tolerance = args.tol;
        settings.max_iterations = args.max_iters;
        settings.init = args.init == "zero" ? dlo::SolverSettings::Init::Zero
                                            : dlo::SolverSettings::Init::Guide;
        const auto problem = dlo::ScopeProblem::assemble(start, target, params, scene.time_steps,
                                                         scene.w1, scene.w2);
        const dlo::ScopeSolution sol = dlo::solve(problem, settings);
        const std::string path =
            want_energy ? with_suffix(args.out, ".scope.json") : args.out;
        dlo::write_text_file(path, dlo::solution_to_json(sol));
        const double mle = dlo::max_length_error(sol.trajectory, params);
        std::printf("scope: status=%s objective=%.6g max_length_error=%.6g m time=%.6g s -> %s\n",
                    dlo::to_string(sol.status), sol.objective_value, mle, sol.solve_time_s,
                    path.c_str());
        if (sol.status != dlo::SolveStatus::Converged) {
            exit_code = 2;
        }
    }
    if (want_energy) {
        const dlo::EnergyModel model = dlo::EnergyModel::from_rest_shape(
            start, scene.energy.stretch_stiffness, scene.energy.bend_stiffness,
            scene.segment_length);
        const dlo::TrajectoryResult res = dlo::solve_trajectory(
            start, target, model, scene.energy.lambda, scene.time_steps, scene.energy.minimize);
        const dlo::Configuration& final_shape = res.trajectory[res.trajectory.step_count() - 1];
        const double objective = dlo::stretch_energy(final_shape, model) +
                                 dlo::bend_energy(final_shape, model) +
                                 scene.energy.lambda * dlo::shape_error(final_shape, target);
        int iters = 0;
        for (const dlo::MinimizeStats& s : res.step_stats) iters += s.iterations;
        const std::string path =
            want_scope ? with_suffix(args.out, ".energy.json") : args.out;
        dlo::write_text_file(
            path, dlo::energy_solution_to_json(
                      res.trajectory, objective, iters, res.total_time_s,
                      trajectory_violation(res.trajectory, scene.segment_length),
                      res.all_converged));
        const double mle = dlo::max_length_error(res.trajectory, params);
        std::printf("energy: status=%s objective=%.6g max_length_error=%.6g m time=%.6g s -> %s\n",
                    res.all_converged ? "Converged" : "MaxIterations", objective, mle,
                    res.total_time_s, path.c_str());
        if (!res.all_converged) {
            exit_code = 2;
        }
    }
    return exit_code;
}

void print_human_table(const std::vector<dlo::TaskRun>& runs) {
    std::printf("%-10s %12s %14s %14s %12s %14s %14s %9s\n", "task", "scope_t[s]",
                "scope_err[m]", "scope_err[cm]", "energy_t[s]", "energy_err[m]", "energy_err[cm]",
                "speedup");
    for (const dlo::TaskRun& r : runs) {
        const double speedup =
            r.scope.solve_time_s > 0 ? r.energy.solve_time_s / r.scope.solve_time_s : 0.0;
        std::printf("%-10s %12.4g %14.4g %14.4g %12.4g %14.4g %14.4g %9.4g\n",
                    r.scope.task.c_str(), r.scope.solve_time_s, r.scope.max_length_error_m,
                    100.0 * r.scope.max_length_error_m, r.energy.solve_time_s,
                    r.energy.max_length_error_m, 100.0 * r.energy.max_length_error_m, speedup);
    }
}

int run_bench(const BenchArgs& args) {
    std::vector<dlo::BenchTask> tasks;
    if (!args.scene_path.empty()) {
        const dlo::Scene scene = dlo::load_scene(args.scene_path);
        dlo::BenchTask task;
        std::size_t slash = args.scene_path.find_last_of("/\\");
        task.name = args.scene_path.substr(slash == std::string::npos ? 0 : slash + 1);
        task.start_spec = scene.start;
        task.target_spec = scene.target;
        task.time_steps = scene.time_steps;
        task.w1 = scene.w1;
        task.w2 = scene.w2;
        task.energy = scene.energy;
        tasks.push_back(task);
    } else if (args.suite == "standard") {
        tasks = dlo::standard_suite();
    } else {
        throw std::invalid_argument("unknown suite '" + args.suite + "' (expected: standard)");
    }
    for (dlo::BenchTask& t : tasks) {
        t.repeats = args.repeats;
    }

    int threads = 1;
    if (const char* env = std::getenv("SCOPE_DLO_THREADS")) {
        threads = std::max(1, std::atoi(env));
    }
    threads = std::min<int>(threads, static_cast<int>(tasks.size()));

    std::vector<std::optional<dlo::TaskRun>> slots(tasks.size());
    if (threads <= 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            slots[k] = dlo::run(tasks[k]);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < tasks.size();
                     k = next.fetch_add(1)) {
                    slots[k] = dlo::run(tasks[k]);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }
    std::vector<dlo::TaskRun> runs;
    runs.reserve(slots.size());
    for (std::optional<dlo::TaskRun>& s : slots) {
        runs.push_back(std::move(*s));
    }

    print_human_table(runs);
    const std::string csv = dlo::emit_table(runs);
    if (!args.out_csv.empty()) {
        dlo::write_text_file(args.out_csv, csv);
    } else {
        std::printf("%s", csv.c_str());
    }
    if (!args.out_json.empty()) {
        std::string json = "{\n  \"results\": [";
        bool first = true;
        for (const dlo::TaskRun& r : runs) {
            for (const auto* res : {&r.scope, &r.energy}) {
                if (!first) json += ",";
                first = false;
                char buf[512];
                std::snprintf(buf, sizeof(buf),
                              "\n    {\"task\": \"%s\", \"method\": \"%s\", "
                              "\"solve_time_s\": %.17g, \"max_length_error_m\": %.17g, "
                              "\"final_shape_error_m2\": %.17g, \"iterations\": %d, "
                              "\"status\": \"%s\", \"trajectory\": ",
                              res->task.c_str(), dlo::to_string(res->method), res->solve_time_s,
                              res->max_length_error_m, res->final_shape_error_m2,
                              res->iterations, res->status.c_str());
                json += buf;
                json += dlo::trajectory_to_json(res->method == dlo::BenchMethod::Scope
                                                    ? r.scope_trajectory
                                                    : r.energy_trajectory);
                json += "}";
            }
        }
        json += "\n  ]\n}\n";
        dlo::write_text_file(args.out_json, json);
    }

    for (const dlo::TaskRun& r : runs) {
        if (r.scope.status.rfind("error", 0) == 0 || r.energy.status.rfind("error", 0) == 0) {
            return 2;
        }
    }
    return 0;
}

int run_render(const RenderArgs& args) {
    std::vector<dlo::Trajectory> trajectories;
    trajectories.reserve(args.trajectory_paths.size());
    for (const std::string& path : args.trajectory_paths) {
        trajectories.push_back(dlo::load_trajectory(path));
    }
    dlo::write_text_file(args.out, dlo::render_svg(trajectories, args.style));
    std::printf("wrote %s (%zu trajectories)\n", args.out.c_str(), trajectories.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCOPE planner for planar deformable linear objects"};
    app.require_subcommand(1);

    PlanArgs plan;
    CLI::App* plan_cmd = app.add_subcommand("plan", "plan one scene and write the trajectory");
    plan_cmd->add_option("scene", plan.scene_path, "scene JSON file")->required();
    plan_cmd->add_option("--method", plan.method, "scope | energy | both")
        ->check(CLI::IsMember({"scope", "energy", "both"}));
    plan_cmd->add_option("--out,-o", plan.out, "output trajectory JSON path");
    plan_cmd->add_option("--rho", plan.rho, "ADMM penalty parameter");
    plan_cmd->add_option("--tol", plan.tol, "primal/dual tolerance");
    plan_cmd->add_option("--max-iters", plan.max_iters, "iteration cap");
    plan_cmd->add_option("--init", plan.init, "guide | zero start")
        ->check(CLI::IsMember({"guide", "zero"}));

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run the benchmark comparison");
    bench_cmd->add_option("--suite", bench.suite, "task suite name (standard)");
    bench_cmd->add_option("--scene", bench.scene_path, "benchmark one custom scene instead");
    bench_cmd->add_option("--repeats", bench.repeats, "timing repeats (median reported)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", bench.out_csv, "CSV output path (stdout when omitted)");
    bench_cmd->add_option("--json", bench.out_json, "full results dump with trajectories");

    RenderArgs render;
    CLI::App* render_cmd = app.add_subcommand("render", "render trajectory files to SVG");
    render_cmd->add_option("trajectories", render.trajectory_paths, "trajectory JSON files")
        ->required()
        ->expected(-1);
    render_cmd->add_option("--out,-o", render.out, "SVG output path");
    render_cmd->add_option("--start-color", render.style.start_color, "hex color of step 1");
    render_cmd->add_option("--target-color", render.style.target_color, "hex color of step T");
    render_cmd->add_option("--intermediate-color", render.style.intermediate_color,
                           "hex color of interior steps");
    render_cmd->add_option("--dash", render.style.baseline_dash_pattern,
                           "dash pattern for overlay trajectories");
    render_cmd->add_option("--canvas", render.style.canvas_size, "canvas size in pixels");
    render_cmd->add_option("--margin", render.style.margin, "margin in pixels");
    render_cmd->add_option("--stroke", render.style.stroke_width, "stroke width in pixels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*plan_cmd) return run_plan(plan);
        if (*bench_cmd) return run_bench(bench);
        if (*render_cmd) return run_render(render);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
