#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

int fail_config(const std::vector<std::string>& errors) {
    for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
    return 2;
}

bool parse_x0(const std::string& text, std::array<double, 3>& out) {
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= 3) return false;
        try {
            std::size_t pos = 0;
            out[i] = std::stod(item, &pos);
            if (pos != item.size()) return false;
        } catch (...) {
            return false;
        }
        ++i;
    }
    return i == 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magnetic ball suspension system: analysis, control design, simulation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string design_kind;
    std::string scenario_name;
    double dt_override = 0.0;
    double t_final_override = 0.0;
    std::string x0_override;

    auto* analyze = app.add_subcommand("analyze", "equilibrium, linearization, rank tests");
    analyze->add_option("--config", config_path, "JSON config file")->required();
    analyze->add_option("--out", out_path, "write the structured report here");

    auto* design = app.add_subcommand("design", "controller/observer/LQR synthesis");
    design->add_option("kind", design_kind, "place | observer | lqr")->required();
    design->add_option("--config", config_path, "JSON config file")->required();
    design->add_option("--out", out_path, "write the structured report here");

    auto* simulate = app.add_subcommand("simulate", "closed-loop scenario, CSV trace out");
    simulate->add_option("scenario", scenario_name,
                         "linear-feedback | nonlinear-feedback | linear-observer | "
                         "nonlinear-observer | linear-lqr | nonlinear-lqr")
        ->required();
    simulate->add_option("--config", config_path, "JSON config file")->required();
    auto* dt_opt = simulate->add_option("--dt", dt_override, "integration step [s]");
    auto* tf_opt = simulate->add_option("--t-final", t_final_override, "horizon [s]");
    auto* x0_opt = simulate->add_option("--x0", x0_override, "initial state a,b,c");
    simulate->add_option("--out", out_path, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto loaded = mbssctl::load_config(config_path);
    if (!loaded.errors.empty()) return fail_config(loaded.errors);
    auto& cfg = loaded.config;

    if (!out_path.empty()) cfg.output_path = out_path;
    if (simulate->parsed()) {
        if (dt_opt->count()) cfg.sim.dt = dt_override;
        if (tf_opt->count()) cfg.sim.t_final = t_final_override;
        if (x0_opt->count()) {
            if (!parse_x0(x0_override, cfg.sim.x0))
                return fail_config({"--x0 expects three comma-separated numbers"});
            cfg.x0_set = true;
        }
    }

    auto errors = mbssctl::validate(cfg);

    if (analyze->parsed()) {
        if (!errors.empty()) return fail_config(errors);
        return mbssctl::cmd_analyze(cfg, std::cout);
    }

    if (design->parsed()) {
        mbssctl::DesignKind kind;
        if (!mbssctl::parse_design_kind(design_kind, kind))
            errors.push_back("design kind must be place, observer or lqr");
        if (!errors.empty()) return fail_config(errors);
        return mbssctl::cmd_design(cfg, kind, std::cout);
    }

    mbssctl::Scenario scenario{};
    if (!mbssctl::parse_scenario(scenario_name, scenario))
        errors.push_back("unknown scenario '" + scenario_name + "'");
    else
        for (const auto& e : mbssctl::validate_for_scenario(cfg, scenario)) errors.push_back(e);
    if (!errors.empty()) return fail_config(errors);
    return mbssctl::cmd_simulate(cfg, scenario, std::cout);
}
