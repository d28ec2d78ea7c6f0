#include "dlo/energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace dlo {

EnergyModel EnergyModel::from_rest_shape(const Configuration& rest_shape, double k_s, double k_b,
                                         double l_s) {
    if (!(k_s > 0.0) || !(k_b > 0.0) || !(l_s > 0.0)) {
        throw std::invalid_argument("EnergyModel: stiffnesses and rest length must be positive");
    }
    EnergyModel model;
    model.stretch_stiffness = k_s;
    model.bend_stiffness = k_b;
    model.segment_rest_length = l_s;
    model.rest_angles = turning_angles(rest_shape);
    return model;
}

double stretch_energy(const Configuration& c, const EnergyModel& model) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double stretch = norm(c[i + 1] - c[i]) - model.segment_rest_length;
        total += 0.5 * model.stretch_stiffness * stretch * stretch;
    }
    return total;
}

double bend_energy(const Configuration& c, const EnergyModel& model) {
    const std::vector<double> angles = turning_angles(c);
    if (angles.size() != model.rest_angles.size()) {
        throw std::invalid_argument("bend_energy: model rest angles expect " +
                                    std::to_string(model.rest_angles.size() + 2) + " nodes, got " +
                                    std::to_string(c.size()));
    }
    double total = 0.0;
    for (std::size_t j = 0; j < angles.size(); ++j) {
        const double dev = angles[j] - model.rest_angles[j];
        total += 0.5 * model.bend_stiffness * dev * dev;
    }
    return total;
}

std::pair<double, std::vector<Point2>> internal_energy_and_gradient(const Configuration& c,
                                                                    const EnergyModel& model) {
    const std::size_t n = c.size();
    std::vector<Point2> grad(n, Point2{0.0, 0.0});
    double energy = 0.0;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Point2 d = c[i + 1] - c[i];
        const double len = norm(d);
        if (len == 0.0) {
            throw std::domain_error("internal_energy_and_gradient: zero-length segment at " +
                                    std::to_string(i));
        }
        const double stretch = len - model.segment_rest_length;
        energy += 0.5 * model.stretch_stiffness * stretch * stretch;
        const Point2 pull = (model.stretch_stiffness * stretch / len) * d;
        grad[i + 1] = grad[i + 1] + pull;
        grad[i] = grad[i] - pull;
    }

    if (n >= 3) {
        if (model.rest_angles.size() != n - 2) {
            throw std::invalid_argument("internal_energy_and_gradient: model rest angles expect " +
                                        std::to_string(model.rest_angles.size() + 2) +
                                        " nodes, got " + std::to_string(n));
        }
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const Point2 a = c[j] - c[j - 1];
            const Point2 b = c[j + 1] - c[j];
            const double angle = std::atan2(cross(a, b), dot(a, b));
            const double dev = angle - model.rest_angles[j - 1];
            energy += 0.5 * model.bend_stiffness * dev * dev;
            // d(angle)/da = -perp(a)/|a|^2, d(angle)/db = perp(b)/|b|^2
            const Point2 ga{a.y / squared_norm(a), -a.x / squared_norm(a)};
            const Point2 gb{-b.y / squared_norm(b), b.x / squared_norm(b)};
            const double f = model.bend_stiffness * dev;
            grad[j - 1] = grad[j - 1] - f * ga;
            grad[j] = grad[j] + f * (ga - gb);
            grad[j + 1] = grad[j + 1] + f * gb;
        }
    }
    return {energy, std::move(grad)};
}

namespace {

struct Objective {
    const EnergyModel& model;
    const Configuration& target;
    double lambda;
    bool pinned;

    double value_and_gradient(const std::vector<Point2>& nodes, std::vector<Point2>& grad) const {
        const Configuration c{std::vector<Point2>(nodes)};
        auto [energy, g] = internal_energy_and_gradient(c, model);
        double value = energy;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Point2 d = nodes[i] - target[i];
            value += lambda * squared_norm(d);
            g[i] = g[i] + 2.0 * lambda * d;
        }
        if (pinned) {
            g.front() = {0.0, 0.0};
            g.back() = {0.0, 0.0};
        }
        grad = std::move(g);
        return value;
    }
};

double grad_norm(const std::vector<Point2>& g) {
    double s = 0.0;
    for (const Point2& p : g) s += squared_norm(p);
    return std::sqrt(s);
}

}  // namespace

EquilibriumResult solve_equilibrium(const Configuration& start, const Configuration& target,
                                    const EnergyModel& model, double lambda,
                                    const MinimizeOptions& opts) {
    if (start.size() != target.size()) {
        throw std::invalid_argument("solve_equilibrium: node counts differ");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("solve_equilibrium: lambda must be nonnegative");
    }
    const auto t_begin = std::chrono::steady_clock::now();
    const double tol = opts.grad_tol > 0.0
                           ? opts.grad_tol
                           : 1e-8 * (model.stretch_stiffness + model.bend_stiffness);

    std::vector<Point2> x = start.nodes();
    if (opts.pin_endpoints) {
        x.front() = target[0];
        x.back() = target[target.size() - 1];
    }
    const Objective obj{model, target, lambda, opts.pin_endpoints};

    MinimizeStats stats;
    std::vector<Point2> g, g_new, x_new;
    double value = obj.value_and_gradient(x, g);
    ++stats.evaluations;

    // limited-memory curvature pairs for the accelerated direction
    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;
    auto flat = [](const std::vector<Point2>& v) {
        std::vector<double> out(2 * v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            out[2 * i] = v[i].x;
            out[2 * i + 1] = v[i].y;
        }
        return out;
    };
    auto dot_flat = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    double step = 1.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        stats.iterations = it;
        stats.grad_norm = grad_norm(g);
        if (stats.grad_norm <= tol) {
            stats.converged = true;
            break;
        }

        // descent direction: steepest descent, or the two-loop recursion over
        // stored curvature pairs when accelerating
        std::vector<double> dir = flat(g);
        for (double& v : dir) v = -v;
        if (opts.accelerate && !pairs.empty()) {
            std::vector<double> q = flat(g);
            std::vector<double> alphas(pairs.size());
            for (std::size_t k = pairs.size(); k-- > 0;) {
                const auto& [s_k, y_k] = pairs[k];
                const double rho_k = 1.0 / dot_flat(y_k, s_k);
                alphas[k] = rho_k * dot_flat(s_k, q);
                for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alphas[k] * y_k[i];
            }
            const auto& [s_b, y_b] = pairs.back();
            const double gamma = dot_flat(s_b, y_b) / dot_flat(y_b, y_b);
            for (double& v : q) v *= gamma;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const auto& [s_k, y_k] = pairs[k];
                const double rho_k = 1.0 / dot_flat(y_k, s_k);
                const double beta = rho_k * dot_flat(y_k, q);
                for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alphas[k] - beta) * s_k[i];
            }
            // use the quasi-Newton direction only while it descends
            std::vector<double> gf = flat(g);
            if (dot_flat(q, gf) > 0.0) {
                for (std::size_t i = 0; i < q.size(); ++i) dir[i] = -q[i];
                step = 1.0;
            }
        }

        const std::vector<double> gf = flat(g);
        const double slope = dot_flat(gf, dir);  // negative along a descent direction

        // Armijo backtracking from a doubled warm-start trial
        step = std::min(step * 2.0, 1e6);
        double accepted = 0.0;
        double trial = value;
        while (true) {
            x_new = x;
            for (std::size_t i = 0; i < x.size(); ++i) {
                x_new[i].x += step * dir[2 * i];
                x_new[i].y += step * dir[2 * i + 1];
            }
            bool usable = true;
            try {
                trial = obj.value_and_gradient(x_new, g_new);
            } catch (const std::domain_error&) {
                usable = false;  // step collapsed a segment; reject and shorten
            }
            ++stats.evaluations;
            if (usable && trial <= value + 1e-4 * step * slope) {
                accepted = step;
                break;
            }
            step *= 0.5;
            if (step < 1e-18) break;
        }
        if (accepted == 0.0) {
            break;  // line search exhausted; gradient is noise-level
        }
        if (opts.accelerate) {
            std::vector<double> s_k(2 * x.size()), y_k(2 * x.size());
            const std::vector<double> gnf = flat(g_new);
            for (std::size_t i = 0; i < s_k.size(); ++i) {
                s_k[i] = accepted * dir[i];
                y_k[i] = gnf[i] - gf[i];
            }
            if (dot_flat(s_k, y_k) > 1e-14) {
                pairs.emplace_back(std::move(s_k), std::move(y_k));
                while (static_cast<int>(pairs.size()) > std::max(opts.history, 1)) {
                    pairs.pop_front();
                }
            }
        }
        x = x_new;
        g = g_new;
        value = trial;
    }

    Configuration shape{std::move(x)};
    EnergyReport report;
    report.stretch_total = stretch_energy(shape, model);
    report.bend_total = shape.size() >= 3 ? bend_energy(shape, model) : 0.0;
    report.shape_term = shape_error(shape, target);
    report.objective = report.stretch_total + report.bend_total + lambda * report.shape_term;
    stats.solve_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return {std::move(shape), report, stats};
}

TrajectoryResult solve_trajectory(const Configuration& start, const Configuration& target,
                                  const EnergyModel& model, double lambda, int time_steps,
                                  const MinimizeOptions& opts) {
    const auto t_begin = std::chrono::steady_clock::now();
    const Trajectory guide = build_guide(start, target, time_steps);
    std::vector<Configuration> steps;
    steps.reserve(time_steps);
    steps.push_back(start);
    std::vector<MinimizeStats> step_stats;
    step_stats.reserve(time_steps - 1);
    bool all_converged = true;
    Configuration current = start;
    for (int t = 1; t < time_steps; ++t) {
        EquilibriumResult eq = solve_equilibrium(current, guide[t], model, lambda, opts);
        all_converged = all_converged && eq.stats.converged;
        step_stats.push_back(eq.stats);
        current = std::move(eq.shape);
        steps.push_back(current);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return {Trajectory(std::move(steps)), std::move(step_stats), elapsed, all_converged};
}

}  // namespace dlo
