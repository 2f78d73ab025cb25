#pragma once

#include <array>
#include <string>
#include <vector>

#include "mbss/plant.hpp"
#include "mbss/sim.hpp"

namespace mbssctl {

enum class Scenario {
    LinearFeedback,
    NonlinearFeedback,
    LinearObserver,
    NonlinearObserver,
    LinearLqr,
    NonlinearLqr,
};

bool parse_scenario(const std::string& name, Scenario& out);
const char* scenario_name(Scenario s);
bool scenario_is_linear(Scenario s);
bool scenario_uses_observer(Scenario s);

// Everything a command needs, merged from the config file and flag overrides.
struct RunConfig {
    mbss::plant::PlantParams plant;
    bool use_paper_rounding = false;

    std::vector<double> controller_poles{-5.0, -10.0, -20.0};
    std::vector<double> observer_poles{-15.0, -30.0, -60.0};
    std::array<double, 3> q_diag{9.0, 0.0, 0.0};
    double r_weight = 1.0;

    mbss::sim::SimConfig sim;
    bool x0_set = false;    // scenario-dependent default applied when false
    bool xhat0_set = false;

    std::string output_path; // command-dependent default applied when empty
};

struct LoadResult {
    RunConfig config;
    std::vector<std::string> errors; // parse errors; config unusable when non-empty
};

// Reads a JSON config file with top-level objects plant/design/sim/output.
// Unknown keys at any level are reported as errors (catches typos in
// physics constants). Missing keys keep their defaults.
LoadResult load_config(const std::string& path);

// Invariant checks over the merged configuration; returns every violation.
std::vector<std::string> validate(const RunConfig& cfg);

} // namespace mbssctl
