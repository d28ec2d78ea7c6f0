#include "dlo/scene.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dlo {

using nlohmann::json;

namespace {

// nlohmann reports byte offsets; scenes are small enough to rescan for the
// line and column people actually want in an error message.
std::string position_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_checked(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("malformed JSON at " + position_of(text, e.byte) + ": " +
                                 e.what());
    }
}

ShapeSpec parse_shape(const json& j, int n_nodes, double segment_length, const char* which) {
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument(std::string(which) + " shape needs a \"kind\" field");
    }
    ShapeSpec spec;
    spec.kind = shape_kind_from_string(j.at("kind").get<std::string>());
    spec.n_nodes = n_nodes;
    spec.segment_length = segment_length;
    if (j.contains("origin")) {
        const auto& o = j.at("origin");
        if (!o.is_array() || o.size() != 2) {
            throw std::invalid_argument(std::string(which) + " origin must be [x, y]");
        }
        spec.origin = {o[0].get<double>(), o[1].get<double>()};
    }
    if (j.contains("rotation")) {
        spec.rotation = j.at("rotation").get<double>();
    }
    return spec;
}

json config_to_json(const Configuration& c) {
    json arr = json::array();
    for (const Point2& p : c.nodes()) {
        arr.push_back(json::array({p.x, p.y}));
    }
    return arr;
}

}  // namespace

Scene parse_scene(const std::string& text) {
    const json j = parse_checked(text);
    for (const char* key : {"n_nodes", "segment_length", "start", "target", "T"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("scene is missing \"") + key + "\"");
        }
    }
    Scene scene;
    scene.n_nodes = j.at("n_nodes").get<int>();
    scene.segment_length = j.at("segment_length").get<double>();
    if (scene.n_nodes < 3) {
        throw std::invalid_argument("scene n_nodes must be at least 3, got " +
                                    std::to_string(scene.n_nodes));
    }
    if (!(scene.segment_length > 0.0)) {
        throw std::invalid_argument("scene segment_length must be positive");
    }
    scene.start = parse_shape(j.at("start"), scene.n_nodes, scene.segment_length, "start");
    scene.target = parse_shape(j.at("target"), scene.n_nodes, scene.segment_length, "target");
    scene.time_steps = j.at("T").get<int>();
    if (scene.time_steps < 2) {
        throw std::invalid_argument("scene T must be at least 2, got " +
                                    std::to_string(scene.time_steps));
    }
    scene.w1 = j.value("w1", 1.0);
    scene.w2 = j.value("w2", 0.1);
    if (scene.w1 < 0.0 || scene.w2 < 0.0 || scene.w1 + scene.w2 <= 0.0) {
        throw std::invalid_argument("scene weights must be nonnegative with w1 + w2 > 0");
    }
    if (j.contains("energy")) {
        const json& e = j.at("energy");
        scene.energy.stretch_stiffness = e.value("k_s", scene.energy.stretch_stiffness);
        scene.energy.bend_stiffness = e.value("k_b", scene.energy.bend_stiffness);
        scene.energy.lambda = e.value("lambda", scene.energy.lambda);
        if (!(scene.energy.stretch_stiffness > 0.0) || !(scene.energy.bend_stiffness > 0.0) ||
            scene.energy.lambda < 0.0) {
            throw std::invalid_argument("scene energy parameters out of range");
        }
    }
    return scene;
}

Scene load_scene(const std::string& path) { return parse_scene(read_text_file(path)); }

std::string trajectory_to_json(const Trajectory& traj) {
    json steps = json::array();
    for (const Configuration& c : traj.steps()) {
        steps.push_back(config_to_json(c));
    }
    return steps.dump();
}

Trajectory trajectory_from_json_text(const std::string& text) {
    const json j = parse_checked(text);
    const json& steps = j.is_array() ? j : j.at("trajectory");
    if (!steps.is_array() || steps.empty()) {
        throw std::invalid_argument("trajectory document has no steps");
    }
    std::vector<Configuration> configs;
    configs.reserve(steps.size());
    for (const json& s : steps) {
        std::vector<Point2> nodes;
        nodes.reserve(s.size());
        for (const json& p : s) {
            if (!p.is_array() || p.size() != 2) {
                throw std::invalid_argument("trajectory nodes must be [x, y] pairs");
            }
            nodes.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        configs.emplace_back(std::move(nodes));
    }
    return Trajectory(std::move(configs));
}

Trajectory load_trajectory(const std::string& path) {
    return trajectory_from_json_text(read_text_file(path));
}

std::string solution_to_json(const ScopeSolution& solution) {
    json j;
    j["status"] = to_string(solution.status);
    j["objective"] = solution.objective_value;
    j["iterations"] = solution.iterations;
    j["solve_time_s"] = solution.solve_time_s;
    j["max_constraint_violation"] = solution.max_constraint_violation;
    j["trajectory"] = json::parse(trajectory_to_json(solution.trajectory));
    return j.dump(2) + "\n";
}

std::string energy_solution_to_json(const Trajectory& traj, double objective, int iterations,
                                    double solve_time_s, double max_violation, bool converged) {
    json j;
    j["status"] = converged ? "Converged" : "MaxIterations";
    j["objective"] = objective;
    j["iterations"] = iterations;
    j["solve_time_s"] = solve_time_s;
    j["max_constraint_violation"] = max_violation;
    j["trajectory"] = json::parse(trajectory_to_json(traj));
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dlo
