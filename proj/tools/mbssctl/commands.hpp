#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace mbssctl {

enum class DesignKind { Place, Observer, Lqr };

bool parse_design_kind(const std::string& name, DesignKind& out);

// Exit codes: 0 success, 2 config error, 3 numerical/runtime failure.
// Config validation happens before dispatch; these return 0 or 3.
int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_design(const RunConfig& cfg, DesignKind kind, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, Scenario scenario, std::ostream& out);

// Scenario-dependent validation performed on top of validate(cfg)
// (initial condition frame, estimate applicability).
std::vector<std::string> validate_for_scenario(const RunConfig& cfg, Scenario scenario);

} // namespace mbssctl
