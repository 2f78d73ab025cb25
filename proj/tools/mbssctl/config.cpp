#include "config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace mbssctl {

using nlohmann::json;

bool parse_scenario(const std::string& name, Scenario& out) {
    if (name == "linear-feedback") out = Scenario::LinearFeedback;
    else if (name == "nonlinear-feedback") out = Scenario::NonlinearFeedback;
    else if (name == "linear-observer") out = Scenario::LinearObserver;
    else if (name == "nonlinear-observer") out = Scenario::NonlinearObserver;
    else if (name == "linear-lqr") out = Scenario::LinearLqr;
    else if (name == "nonlinear-lqr") out = Scenario::NonlinearLqr;
    else return false;
    return true;
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::LinearFeedback: return "linear-feedback";
        case Scenario::NonlinearFeedback: return "nonlinear-feedback";
        case Scenario::LinearObserver: return "linear-observer";
        case Scenario::NonlinearObserver: return "nonlinear-observer";
        case Scenario::LinearLqr: return "linear-lqr";
        case Scenario::NonlinearLqr: return "nonlinear-lqr";
    }
    return "?";
}

bool scenario_is_linear(Scenario s) {
    return s == Scenario::LinearFeedback || s == Scenario::LinearObserver ||
           s == Scenario::LinearLqr;
}

bool scenario_uses_observer(Scenario s) {
    return s == Scenario::LinearObserver || s == Scenario::NonlinearObserver;
}

namespace {

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> known, std::vector<std::string>& errors) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok) errors.push_back("unknown key '" + prefix + it.key() + "'");
    }
}

void read_number(const json& obj, const char* key, const std::string& prefix, double& out,
                 std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        errors.push_back("'" + prefix + key + "' must be a number");
        return;
    }
    out = v.get<double>();
}

void read_bool(const json& obj, const char* key, const std::string& prefix, bool& out,
               std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
        errors.push_back("'" + prefix + key + "' must be a boolean");
        return;
    }
    out = v.get<bool>();
}

bool read_triple(const json& obj, const char* key, const std::string& prefix,
                 std::array<double, 3>& out, std::vector<std::string>& errors) {
    if (!obj.contains(key)) return false;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 3) {
        errors.push_back("'" + prefix + key + "' must be an array of 3 numbers");
        return false;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) {
            errors.push_back("'" + prefix + key + "' must be an array of 3 numbers");
            return false;
        }
        out[i] = v[i].get<double>();
    }
    return true;
}

void read_pole_list(const json& obj, const char* key, const std::string& prefix,
                    std::vector<double>& out, std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        errors.push_back("'" + prefix + key + "' must be a non-empty array of numbers");
        return;
    }
    std::vector<double> tmp;
    for (const auto& e : v) {
        if (!e.is_number()) {
            errors.push_back("'" + prefix + key + "' must be a non-empty array of numbers");
            return;
        }
        tmp.push_back(e.get<double>());
    }
    out = std::move(tmp);
}

} // namespace

LoadResult load_config(const std::string& path) {
    LoadResult result;
    auto& cfg = result.config;
    auto& errors = result.errors;

    std::ifstream in(path);
    if (!in) {
        errors.push_back("cannot open config file '" + path + "'");
        return result;
    }

    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        errors.push_back(std::string("config is not valid JSON: ") + e.what());
        return result;
    }
    if (!root.is_object()) {
        errors.push_back("config root must be a JSON object");
        return result;
    }
    check_keys(root, "", {"plant", "design", "sim", "output"}, errors);

    if (root.contains("plant")) {
        const auto& pj = root.at("plant");
        if (!pj.is_object()) {
            errors.push_back("'plant' must be an object");
        } else {
            check_keys(pj, "plant.", {"M", "K", "L", "R", "g", "E", "use_paper_rounding"}, errors);
            read_number(pj, "M", "plant.", cfg.plant.mass_M, errors);
            read_number(pj, "K", "plant.", cfg.plant.force_const_K, errors);
            read_number(pj, "L", "plant.", cfg.plant.inductance_L, errors);
            read_number(pj, "R", "plant.", cfg.plant.resistance_R, errors);
            read_number(pj, "g", "plant.", cfg.plant.gravity_g, errors);
            read_number(pj, "E", "plant.", cfg.plant.nominal_E, errors);
            read_bool(pj, "use_paper_rounding", "plant.", cfg.use_paper_rounding, errors);
        }
    }

    if (root.contains("design")) {
        const auto& dj = root.at("design");
        if (!dj.is_object()) {
            errors.push_back("'design' must be an object");
        } else {
            check_keys(dj, "design.", {"poles", "observer_poles", "q_diag", "r"}, errors);
            read_pole_list(dj, "poles", "design.", cfg.controller_poles, errors);
            read_pole_list(dj, "observer_poles", "design.", cfg.observer_poles, errors);
            read_triple(dj, "q_diag", "design.", cfg.q_diag, errors);
            read_number(dj, "r", "design.", cfg.r_weight, errors);
        }
    }

    if (root.contains("sim")) {
        const auto& sj = root.at("sim");
        if (!sj.is_object()) {
            errors.push_back("'sim' must be an object");
        } else {
            check_keys(sj, "sim.", {"dt", "t_final", "v_ref", "x0", "xhat0"}, errors);
            read_number(sj, "dt", "sim.", cfg.sim.dt, errors);
            read_number(sj, "t_final", "sim.", cfg.sim.t_final, errors);
            read_number(sj, "v_ref", "sim.", cfg.sim.v_ref, errors);
            if (read_triple(sj, "x0", "sim.", cfg.sim.x0, errors)) cfg.x0_set = true;
            if (read_triple(sj, "xhat0", "sim.", cfg.sim.xhat0, errors)) cfg.xhat0_set = true;
        }
    }

    if (root.contains("output")) {
        const auto& oj = root.at("output");
        if (!oj.is_object()) {
            errors.push_back("'output' must be an object");
        } else {
            check_keys(oj, "output.", {"path"}, errors);
            if (oj.contains("path")) {
                if (!oj.at("path").is_string())
                    errors.push_back("'output.path' must be a string");
                else
                    cfg.output_path = oj.at("path").get<std::string>();
            }
        }
    }

    return result;
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errors = mbss::plant::validate(cfg.plant);

    auto check_poles = [&](const std::vector<double>& poles, const char* name) {
        if (poles.size() != 3) {
            errors.push_back(std::string(name) + " must list exactly 3 poles");
            return;
        }
        for (double v : poles) {
            if (!std::isfinite(v) || v >= 0.0) {
                errors.push_back(std::string(name) +
                                 " must be strictly in the open left half plane");
                return;
            }
        }
    };
    check_poles(cfg.controller_poles, "design.poles");
    check_poles(cfg.observer_poles, "design.observer_poles");

    for (double v : cfg.q_diag)
        if (!std::isfinite(v) || v < 0.0) {
            errors.push_back("design.q_diag entries must be >= 0");
            break;
        }
    if (!std::isfinite(cfg.r_weight) || !(cfg.r_weight > 0.0))
        errors.push_back("design.r must be > 0");

    for (const auto& e : mbss::sim::validate(cfg.sim)) errors.push_back(e);
    return errors;
}

} // namespace mbssctl
