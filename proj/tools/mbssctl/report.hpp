#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbss/design.hpp"
#include "mbss/lti.hpp"
#include "mbss/plant.hpp"
#include "mbss/polynomial.hpp"

#include "config.hpp"

namespace mbssctl {

// One computed value that strayed more than 1% from its reference-table
// entry. References are used only here, never as computation inputs.
struct Discrepancy {
    std::string item;
    double computed = 0.0;
    double reference = 0.0;
    double rel_diff = 0.0;
};

struct AnalysisReport {
    bool rounded = false;
    mbss::plant::EquilibriumPoint eq;
    mbss::lti::StateSpace ss;
    std::vector<double> char_coeffs;
    std::vector<mbss::numkit::ComplexRoot> open_loop_eigs;
    bool open_loop_stable = false;
    mbss::numkit::Matrix ctrb;
    mbss::numkit::Matrix obsv;
    std::size_t rank_ctrb = 0;
    std::size_t rank_obsv = 0;
    bool controllable = false;
    bool observable = false;
};

struct PlacementReport {
    bool rounded = false;
    std::vector<double> requested_poles;
    std::vector<double> phi;
    std::vector<double> phi_bar;
    mbss::numkit::Matrix a_c;
    mbss::numkit::Matrix b_c;
    mbss::numkit::Matrix t_c;
    mbss::numkit::Matrix k_c;
    mbss::numkit::Matrix k;
    std::vector<mbss::numkit::ComplexRoot> achieved;
    std::vector<Discrepancy> discrepancies;
};

struct ObserverReport {
    bool rounded = false;
    std::vector<double> requested_poles;
    mbss::numkit::Matrix g;
    std::vector<mbss::numkit::ComplexRoot> achieved;
};

struct LqrReport {
    bool rounded = false;
    std::array<double, 3> q_diag{};
    double r_weight = 1.0;
    mbss::design::CareSolution care{mbss::numkit::Matrix(1, 1), mbss::numkit::Matrix(1, 1), 0, 0.0};
    std::vector<mbss::numkit::ComplexRoot> closed_loop_eigs;
    bool closed_loop_stable = false;
    std::vector<Discrepancy> discrepancies;
};

AnalysisReport build_analysis(const RunConfig& cfg);
PlacementReport build_placement(const RunConfig& cfg);
ObserverReport build_observer(const RunConfig& cfg);
LqrReport build_lqr(const RunConfig& cfg);

void print_text(const AnalysisReport& r, std::ostream& out);
void print_text(const PlacementReport& r, std::ostream& out);
void print_text(const ObserverReport& r, std::ostream& out);
void print_text(const LqrReport& r, std::ostream& out);

nlohmann::json to_json(const AnalysisReport& r);
nlohmann::json to_json(const PlacementReport& r);
nlohmann::json to_json(const ObserverReport& r);
nlohmann::json to_json(const LqrReport& r);

} // namespace mbssctl
