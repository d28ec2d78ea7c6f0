#ifndef DLO_BENCH_HPP
#define DLO_BENCH_HPP

#include <string>
#include <vector>

#include "dlo/energy.hpp"
#include "dlo/geometry.hpp"
#include "dlo/scope.hpp"
#include "dlo/shapes.hpp"

namespace dlo {

// Energy-method configuration for one benchmark scene.
struct EnergyOptions {
    double stretch_stiffness = 100.0;
    double bend_stiffness = 1.0;
    double lambda = 10.0;
    MinimizeOptions minimize;
};

struct BenchTask {
    std::string name;
    ShapeSpec start_spec;
    ShapeSpec target_spec;
    int time_steps = 10;
    double w1 = 1.0;
    double w2 = 0.1;
    SolverSettings scope_settings;
    EnergyOptions energy;
    int repeats = 5;  // timing repeats; the median is reported
};

enum class BenchMethod { Scope, EnergyBased };

const char* to_string(BenchMethod method);

struct BenchResult {
    std::string task;
    BenchMethod method = BenchMethod::Scope;
    double solve_time_s = 0.0;     // median wall-clock over repeats
    double assembly_time_s = 0.0;  // SCOPE problem construction (included in solve_time_s)
    double max_length_error_m = 0.0;
    double final_shape_error_m2 = 0.0;  // sum of squared node distances to the target
    int iterations = 0;
    std::string status;
};

struct TaskRun {
    BenchResult scope;
    BenchResult energy;
    Trajectory scope_trajectory;
    Trajectory energy_trajectory;
};

// The four standard transitions at N = 15, l_s = 0.05 m, T = 10.
std::vector<BenchTask> standard_suite();

// Runs both methods on the task's scene. Timing is the wall-clock median over
// task.repeats, excluding shape generation and including SCOPE assembly.
// Method failures are recorded in the result status; they do not throw.
TaskRun run(const BenchTask& task);

// CSV: task, scope_time_s, scope_max_err_m, energy_time_s, energy_max_err_m,
// speedup. Four significant digits.
std::string emit_table(const std::vector<TaskRun>& runs);

}  // namespace dlo

#endif  // DLO_BENCH_HPP
