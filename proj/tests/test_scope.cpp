#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "dlo/geometry.hpp"
#include "dlo/scope.hpp"
#include "dlo/shapes.hpp"
#include "oracles.hpp"

using dlo::Configuration;
using dlo::DloParams;
using dlo::Point2;
using dlo::ScopeProblem;
using dlo::ScopeSolution;
using dlo::SolverSettings;
using dlo::Trajectory;

namespace {

Configuration shape(dlo::ShapeKind kind, int n, double ls, double rot = 0.0) {
    dlo::ShapeSpec s;
    s.kind = kind;
    s.n_nodes = n;
    s.segment_length = ls;
    s.rotation = rot;
    return dlo::generate_shape(s);
}

Trajectory transformed(const Trajectory& traj, double angle, Point2 shift) {
    std::vector<Configuration> steps;
    for (const Configuration& c : traj.steps()) {
        std::vector<Point2> nodes;
        for (const Point2& p : c.nodes()) nodes.push_back(dlo::rotated(p, angle) + shift);
        steps.emplace_back(std::move(nodes));
    }
    return Trajectory(std::move(steps));
}

Configuration transformed(const Configuration& c, double angle, Point2 shift) {
    std::vector<Point2> nodes;
    for (const Point2& p : c.nodes()) nodes.push_back(dlo::rotated(p, angle) + shift);
    return Configuration(std::move(nodes));
}

double max_violation(const Trajectory& traj, double l0) {
    double worst = 0.0;
    for (const Configuration& c : traj.steps()) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            worst = std::max(worst, dlo::norm(c[i + 1] - c[i]) - l0);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("smoothness objective") {
    const Configuration a({{0, 0}, {1, 0}});
    SUBCASE("constant trajectory scores zero") {
        CHECK(dlo::smoothness_objective(Trajectory({a, a, a})) == doctest::Approx(0.0));
    }
    SUBCASE("a single displaced node contributes its squared distance") {
        const Configuration b({{0, 0}, {1.3, 0.4}});
        CHECK(dlo::smoothness_objective(Trajectory({a, b})) == doctest::Approx(0.25));
    }
    SUBCASE("matches naive recomputation on random trajectories") {
        auto rng = oracles::make_rng(40);
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<Configuration> steps;
            for (int t = 0; t < 5; ++t) {
                steps.push_back(oracles::random_configuration(rng, 6));
            }
            const Trajectory traj(std::move(steps));
            CHECK(dlo::smoothness_objective(traj) ==
                  doctest::Approx(oracles::naive_smoothness(traj)).epsilon(1e-12));
        }
    }
    SUBCASE("linear guide displacement sums as (T-1) * per-step") {
        auto rng = oracles::make_rng(41);
        const Configuration start = oracles::random_configuration(rng, 5);
        const Configuration target = oracles::random_configuration(rng, 5);
        const int steps = 6;
        const Trajectory guide = dlo::build_guide(start, target, steps);
        double expected = 0.0;
        for (std::size_t i = 0; i < start.size(); ++i) {
            expected += dlo::squared_norm(target[i] - start[i]) / (steps - 1);
        }
        CHECK(dlo::smoothness_objective(guide) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("midpoint objective counts only interior nodes at interior steps") {
    const Configuration start = shape(dlo::ShapeKind::I, 4, 0.1);
    const Trajectory guide = dlo::build_guide(start, start, 4);

    SUBCASE("trajectory equal to guide scores zero") {
        CHECK(dlo::midpoint_objective(guide, guide) == doctest::Approx(0.0));
    }
    SUBCASE("boundary node and boundary step deviations are excluded") {
        std::vector<Configuration> steps = guide.steps();
        std::vector<Point2> nodes = steps[1].nodes();
        nodes[0] = nodes[0] + Point2{5, 5};  // endpoint node at an interior step
        steps[1] = Configuration(nodes);
        nodes = steps[0].nodes();
        nodes[2] = nodes[2] + Point2{5, 5};  // interior node at a boundary step
        steps[0] = Configuration(nodes);
        CHECK(dlo::midpoint_objective(Trajectory(steps), guide) == doctest::Approx(0.0));
    }
    SUBCASE("an interior deviation contributes its square") {
        std::vector<Configuration> steps = guide.steps();
        std::vector<Point2> nodes = steps[2].nodes();
        nodes[1] = nodes[1] + Point2{0.1, 0.0};
        steps[2] = Configuration(nodes);
        CHECK(dlo::midpoint_objective(Trajectory(steps), guide) == doctest::Approx(0.01));
    }
    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(
            dlo::midpoint_objective(dlo::build_guide(start, start, 5), guide),
            std::invalid_argument);
    }
}

TEST_CASE("objective_value composes the weighted terms") {
    const Configuration start = shape(dlo::ShapeKind::QSW, 8, 0.05);
    const Configuration target = shape(dlo::ShapeKind::HSW, 8, 0.05);
    const DloParams params{8, 0.05};
    const auto problem = ScopeProblem::assemble(start, target, params, 5, 1.0, 0.4);

    SUBCASE("on the guide the midpoint term vanishes") {
        const Trajectory guide = dlo::build_guide(start, target, 5);
        CHECK(problem.objective_value(guide) ==
              doctest::Approx(1.0 * dlo::smoothness_objective(guide)).epsilon(1e-12));
    }
    SUBCASE("with w1 = 0 the guide scores zero") {
        const auto p0 = ScopeProblem::assemble(start, target, params, 5, 0.0, 0.4);
        CHECK(p0.objective_value(dlo::build_guide(start, target, 5)) == doctest::Approx(0.0));
    }
    SUBCASE("random feasible trajectory equals the weighted sum of parts") {
        auto rng = oracles::make_rng(5);
        std::vector<Configuration> steps;
        steps.push_back(start);
        for (int t = 0; t < 3; ++t) steps.push_back(oracles::random_configuration(rng, 8, 0.1));
        steps.push_back(target);
        const Trajectory traj(std::move(steps));
        const Trajectory guide = dlo::build_guide(start, target, 5);
        const double expect = 1.0 * dlo::smoothness_objective(traj) +
                              0.4 * dlo::midpoint_objective(traj, guide);
        CHECK(problem.objective_value(traj) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("assembly validates boundaries and reports sizes") {
    const int n = 15;
    const double ls = 0.05;
    const Configuration start = shape(dlo::ShapeKind::QSW, n, ls);
    const Configuration target = shape(dlo::ShapeKind::HSW, n, ls);
    const DloParams params{n, ls};

    SUBCASE("feasible scene assembles with the documented sizes") {
        const auto problem = ScopeProblem::assemble(start, target, params, 10, 1.0, 0.1);
        CHECK(problem.variable_count() == 2 * n * 10);
        CHECK(problem.cone_constraint_count() == (n - 1) * 10);
        CHECK(2 * problem.cone_constraint_count() == 2 * (n - 1) * 10);
        CHECK(problem.equality_count() == 4 * n);
    }
    SUBCASE("a stretched target segment is rejected by name") {
        std::vector<Point2> nodes = target.nodes();
        nodes[7] = nodes[6] + (1.0 + 0.01 / ls) * (nodes[7] - nodes[6]);
        bool threw = false;
        try {
            (void)ScopeProblem::assemble(start, Configuration(nodes), params, 10, 1.0, 0.1);
        } catch (const std::invalid_argument& e) {
            threw = true;
            const std::string msg = e.what();
            CHECK(msg.find("segment 7") != std::string::npos);
            CHECK(msg.find("target") != std::string::npos);
        }
        CHECK(threw);
    }
    SUBCASE("weight validation") {
        CHECK_THROWS_AS(ScopeProblem::assemble(start, target, params, 10, 0.0, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(ScopeProblem::assemble(start, target, params, 10, -1.0, 0.5),
                        std::invalid_argument);
    }
    SUBCASE("start equal to target is optimal as a constant trajectory") {
        const auto problem = ScopeProblem::assemble(start, start, params, 6, 1.0, 0.1);
        const ScopeSolution sol = dlo::solve(problem);
        CHECK(sol.status == dlo::SolveStatus::Converged);
        CHECK(sol.objective_value == doctest::Approx(0.0));
        CHECK(sol.iterations <= 5);
        for (std::size_t t = 0; t < sol.trajectory.step_count(); ++t) {
            for (std::size_t i = 0; i < start.size(); ++i) {
                CHECK(dlo::norm(sol.trajectory[t][i] - start[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("tiny rotating-segment instance matches the projected-gradient oracle") {
    // N=2, T=3, l_0 = 0.15: one interior step with both nodes free.
    const Configuration start({{0, 0}, {0.1, 0}});
    const Configuration target({{0, 0}, {0, 0.1}});
    const DloParams params{2, 0.15};
    const auto problem = ScopeProblem::assemble(start, target, params, 3, 1.0, 0.0);
    SolverSettings settings;
    settings.primal_tolerance = 1e-9;
    settings.dual_tolerance = 1e-9;
    const ScopeSolution sol = dlo::solve(problem, settings);
    REQUIRE(sol.status == dlo::SolveStatus::Converged);

    const auto oracle = oracles::tiny_scope_pgd(start[0], start[1], target[0], target[1], 0.15,
                                                1.0, 1000000, 1e-4);
    CHECK(std::abs(sol.objective_value - oracle.objective) < 1e-4);
    CHECK(dlo::norm(sol.trajectory[1][0] - oracle.a) < 1e-4);
    CHECK(dlo::norm(sol.trajectory[1][1] - oracle.b) < 1e-4);
}

TEST_CASE("taut gripper waypoints activate the cone and match the oracle") {
    // Three nodes; both grippers prescribed well apart at the interior step so
    // the middle node is squeezed into the lens of the two discs.
    const double l0 = 0.1;
    const Configuration start({{0, 0}, {0.05, 0.08}, {0.1, 0}});
    const Configuration target({{0.05, 0}, {0.1, 0.08}, {0.15, 0}});
    const DloParams params{3, l0};
    dlo::GripperWaypoints pins;
    pins.first = {{-0.02, 0.0}};
    pins.last = {{0.17, 0.0}};  // 0.19 apart, just under 2 * l_0

    const auto problem =
        ScopeProblem::assemble(start, target, params, 3, 1.0, 0.3, std::nullopt, pins);
    SolverSettings settings;
    settings.primal_tolerance = 1e-10;
    settings.dual_tolerance = 1e-10;
    const ScopeSolution sol = dlo::solve(problem, settings);
    REQUIRE(sol.status == dlo::SolveStatus::Converged);

    // pinned coordinates are reproduced exactly
    CHECK(sol.trajectory[1][0] == pins.first[0]);
    CHECK(sol.trajectory[1][2] == pins.last[0]);

    const Trajectory guide = dlo::build_guide(start, target, 3);
    const Point2 oracle = oracles::middle_node_pgd(start[1], target[1], guide[1][1], 1.0, 0.3,
                                                   pins.first[0], pins.last[0], l0, 2000000,
                                                   1e-4);
    CHECK(dlo::norm(sol.trajectory[1][1] - oracle) < 1e-5);
    // the cone is genuinely active here
    CHECK(max_violation(sol.trajectory, l0) > -1e-4);
    CHECK(max_violation(sol.trajectory, l0) <= settings.primal_tolerance);
}

TEST_CASE("waypoints farther than the rope is long are rejected") {
    const double l0 = 0.1;
    const Configuration start({{0, 0}, {0.05, 0.08}, {0.1, 0}});
    const DloParams params{3, l0};
    dlo::GripperWaypoints pins;
    pins.first = {{-0.05, 0.0}};
    pins.last = {{0.17, 0.0}};  // 0.22 apart > 2 * l_0
    CHECK_THROWS_AS(
        ScopeProblem::assemble(start, start, params, 3, 1.0, 0.3, std::nullopt, pins),
        std::invalid_argument);
}

TEST_CASE("an unreachable custom anchor is traded against the cone") {
    // The guide's interior shape pulls the middle node far outside the lens
    // allowed by the pinned grippers; the optimum sits on the cone boundary.
    const double l0 = 0.1;
    const Configuration start({{0, 0}, {0.05, 0.08}, {0.1, 0}});
    const Configuration target({{0.05, 0}, {0.1, 0.08}, {0.15, 0}});
    const DloParams params{3, l0};
    dlo::GripperWaypoints pins;
    pins.first = {{-0.02, 0.0}};
    pins.last = {{0.17, 0.0}};
    const Point2 anchor{0.075, 0.5};
    const Trajectory custom_guide(std::vector<Configuration>{
        start, Configuration({pins.first[0], anchor, pins.last[0]}), target});

    const auto problem =
        ScopeProblem::assemble(start, target, params, 3, 1.0, 2.0, custom_guide, pins);
    SolverSettings settings;
    settings.primal_tolerance = 1e-10;
    settings.dual_tolerance = 1e-10;
    settings.max_iterations = 200000;
    const ScopeSolution sol = dlo::solve(problem, settings);
    REQUIRE(sol.status == dlo::SolveStatus::Converged);
    CHECK(max_violation(sol.trajectory, l0) <= 1e-9);

    const Point2 oracle = oracles::middle_node_pgd(start[1], target[1], anchor, 1.0, 2.0,
                                                   pins.first[0], pins.last[0], l0, 2000000,
                                                   1e-4);
    CHECK(dlo::norm(sol.trajectory[1][1] - oracle) < 1e-5);
    // both gripper segments are taut at the lens corner
    CHECK(dlo::norm(sol.trajectory[1][1] - pins.first[0]) == doctest::Approx(l0).epsilon(1e-6));
    CHECK(dlo::norm(sol.trajectory[1][1] - pins.last[0]) == doctest::Approx(l0).epsilon(1e-6));
}

TEST_CASE("zero-start and guide-start reach the same optimum") {
    const Configuration start = shape(dlo::ShapeKind::U, 12, 0.06);
    const Configuration target = shape(dlo::ShapeKind::QSW, 12, 0.06);
    const auto problem = ScopeProblem::assemble(start, target, {12, 0.06}, 8, 1.0, 0.1);

    SolverSettings guide_init;
    SolverSettings zero_init;
    zero_init.init = SolverSettings::Init::Zero;
    const ScopeSolution a = dlo::solve(problem, guide_init);
    const ScopeSolution b = dlo::solve(problem, zero_init);
    REQUIRE(a.status == dlo::SolveStatus::Converged);
    REQUIRE(b.status == dlo::SolveStatus::Converged);
    CHECK(std::abs(a.objective_value - b.objective_value) <=
          1e-4 * std::max(1.0, std::abs(a.objective_value)));
}

TEST_CASE("boundary steps are reproduced bit-for-bit") {
    const Configuration start = shape(dlo::ShapeKind::I, 10, 0.07);
    const Configuration target = shape(dlo::ShapeKind::S, 10, 0.07);
    const auto problem = ScopeProblem::assemble(start, target, {10, 0.07}, 6, 1.0, 0.1);
    const ScopeSolution sol = dlo::solve(problem);
    CHECK(sol.trajectory[0] == start);
    CHECK(sol.trajectory[5] == target);
}

TEST_CASE("guide optimality certificate with w2 = 0") {
    const Configuration start = shape(dlo::ShapeKind::QSW, 10, 0.07);
    const Configuration target = shape(dlo::ShapeKind::L, 10, 0.07);
    const auto problem = ScopeProblem::assemble(start, target, {10, 0.07}, 7, 1.0, 0.0);
    const Trajectory guide = dlo::build_guide(start, target, 7);
    REQUIRE(max_violation(guide, 0.07) <= 1e-12);  // the guide is feasible
    const ScopeSolution sol = dlo::solve(problem);
    CHECK(sol.objective_value <= problem.objective_value(guide) + 1e-8);
}

TEST_CASE("solutions are equivariant under rigid motion") {
    const Configuration start = shape(dlo::ShapeKind::QSW, 10, 0.07);
    const Configuration target = shape(dlo::ShapeKind::HSW, 10, 0.07);
    const double angle = 0.83;
    const Point2 shift{0.4, -1.2};
    const auto problem = ScopeProblem::assemble(start, target, {10, 0.07}, 6, 1.0, 0.1);
    const auto moved =
        ScopeProblem::assemble(transformed(start, angle, shift),
                               transformed(target, angle, shift), {10, 0.07}, 6, 1.0, 0.1);
    const ScopeSolution a = dlo::solve(problem);
    const ScopeSolution b = dlo::solve(moved);
    const Trajectory a_moved = transformed(a.trajectory, angle, shift);
    for (std::size_t t = 0; t < a_moved.step_count(); ++t) {
        for (std::size_t i = 0; i < a_moved.node_count(); ++i) {
            CHECK(dlo::norm(a_moved[t][i] - b.trajectory[t][i]) < 1e-8);
        }
    }
}

TEST_CASE("repeat solves are bit-identical") {
    const Configuration start = shape(dlo::ShapeKind::U, 15, 0.05);
    const Configuration target = shape(dlo::ShapeKind::QSW, 15, 0.05);
    const auto problem = ScopeProblem::assemble(start, target, {15, 0.05}, 10, 1.0, 0.1);
    SolverSettings settings;
    settings.init = SolverSettings::Init::Zero;
    const ScopeSolution a = dlo::solve(problem, settings);
    const ScopeSolution b = dlo::solve(problem, settings);
    REQUIRE(a.trajectory.step_count() == b.trajectory.step_count());
    for (std::size_t t = 0; t < a.trajectory.step_count(); ++t) {
        CHECK(a.trajectory[t] == b.trajectory[t]);
    }
    CHECK(a.iterations == b.iterations);
    CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("residuals settle: combined residual at 10k is within its value at k") {
    const Configuration start = shape(dlo::ShapeKind::I, 15, 0.05);
    const Configuration target = shape(dlo::ShapeKind::S, 15, 0.05);
    const auto problem = ScopeProblem::assemble(start, target, {15, 0.05}, 10, 1.0, 0.1);
    SolverSettings settings;
    settings.init = SolverSettings::Init::Zero;
    settings.record_residuals = true;
    const ScopeSolution sol = dlo::solve(problem, settings);
    REQUIRE(sol.residual_history.size() >= 10);
    for (std::size_t k = 1; 10 * k <= sol.residual_history.size(); ++k) {
        CHECK(sol.residual_history[10 * k - 1] <= sol.residual_history[k - 1]);
    }
}

TEST_CASE("settings are validated and the iteration cap returns the best iterate") {
    const Configuration start = shape(dlo::ShapeKind::QSW, 10, 0.07);
    const Configuration target = shape(dlo::ShapeKind::L, 10, 0.07);
    const auto problem = ScopeProblem::assemble(start, target, {10, 0.07}, 6, 1.0, 0.1);

    SolverSettings bad;
    bad.over_relaxation = 2.5;
    CHECK_THROWS_AS((void)dlo::solve(problem, bad), std::invalid_argument);
    bad = {};
    bad.primal_tolerance = -1.0;
    CHECK_THROWS_AS((void)dlo::solve(problem, bad), std::invalid_argument);

    SolverSettings capped;
    capped.init = SolverSettings::Init::Zero;
    capped.max_iterations = 2;
    const ScopeSolution sol = dlo::solve(problem, capped);
    CHECK(sol.status == dlo::SolveStatus::MaxIterations);
    CHECK(sol.iterations == 2);
    CHECK(sol.trajectory.step_count() == 6);  // best iterate still attached
    CHECK(sol.trajectory[0] == start);
}

TEST_CASE("T = 2 has no interior and returns the boundary pair") {
    const Configuration start = shape(dlo::ShapeKind::I, 6, 0.1);
    const Configuration target = shape(dlo::ShapeKind::U, 6, 0.1);
    const auto problem = ScopeProblem::assemble(start, target, {6, 0.1}, 2, 1.0, 0.1);
    const ScopeSolution sol = dlo::solve(problem);
    CHECK(sol.status == dlo::SolveStatus::Converged);
    CHECK(sol.iterations == 0);
    CHECK(sol.trajectory.step_count() == 2);
    CHECK(sol.trajectory[0] == start);
    CHECK(sol.trajectory[1] == target);
}
