#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "mbss/design.hpp"
#include "mbss/errors.hpp"
#include "mbss/sim.hpp"

#include "csv.hpp"
#include "report.hpp"

namespace mbssctl {

bool parse_design_kind(const std::string& name, DesignKind& out) {
    if (name == "place") out = DesignKind::Place;
    else if (name == "observer") out = DesignKind::Observer;
    else if (name == "lqr") out = DesignKind::Lqr;
    else return false;
    return true;
}

namespace {

void write_report_file(const nlohmann::json& j, const std::string& path) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << j.dump(2) << "\n";
    if (!f)
        throw std::runtime_error("write failed for '" + path + "'");
}

// Numerical and runtime failures map to exit 3, with the failing operation
// named by the exception text.
template <class Fn>
int guarded(std::ostream& out, const char* command, Fn&& fn) {
    try {
        return fn();
    } catch (const mbss::NumericError& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    } catch (const mbss::DomainError& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    } catch (const mbss::NotControllable& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    } catch (const mbss::NotObservable& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    } catch (const mbss::ComplexCoefficients& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    } catch (const mbss::NoStabilizingSeed& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        out << "error: " << command << ": " << e.what() << "\n";
    }
    return 3;
}

} // namespace

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    return guarded(out, "analyze", [&] {
        const auto report = build_analysis(cfg);
        print_text(report, out);
        write_report_file(to_json(report), cfg.output_path);
        return 0;
    });
}

int cmd_design(const RunConfig& cfg, DesignKind kind, std::ostream& out) {
    return guarded(out, "design", [&] {
        switch (kind) {
            case DesignKind::Place: {
                const auto report = build_placement(cfg);
                print_text(report, out);
                write_report_file(to_json(report), cfg.output_path);
                break;
            }
            case DesignKind::Observer: {
                const auto report = build_observer(cfg);
                print_text(report, out);
                write_report_file(to_json(report), cfg.output_path);
                break;
            }
            case DesignKind::Lqr: {
                const auto report = build_lqr(cfg);
                print_text(report, out);
                write_report_file(to_json(report), cfg.output_path);
                break;
            }
        }
        return 0;
    });
}

std::vector<std::string> validate_for_scenario(const RunConfig& cfg, Scenario scenario) {
    std::vector<std::string> errors;
    if (!scenario_is_linear(scenario) && cfg.x0_set && cfg.sim.x0[0] <= 0.0)
        errors.push_back("sim.x0: nonlinear scenarios need x1 > 0 (absolute state)");
    return errors;
}

int cmd_simulate(const RunConfig& cfg, Scenario scenario, std::ostream& out) {
    return guarded(out, "simulate", [&] {
        const auto eq = mbss::plant::equilibrium(cfg.plant, cfg.use_paper_rounding);
        const auto ss = mbss::lti::linearize(cfg.plant, eq);
        const bool linear = scenario_is_linear(scenario);

        mbss::sim::SimConfig sim_cfg = cfg.sim;
        if (!cfg.x0_set) {
            // Default initial condition: a small position deviation (linear),
            // or the hover point with x1 perturbed by 5% (nonlinear).
            if (linear)
                sim_cfg.x0 = {0.01, 0.0, 0.0};
            else
                sim_cfg.x0 = {eq.state.position * 1.05, eq.state.velocity, eq.state.current};
        }

        mbss::numkit::Matrix q(3, 3);
        for (std::size_t i = 0; i < 3; ++i) q(i, i) = cfg.q_diag[i];
        const auto gains = mbss::design::synthesize(
            ss, mbss::design::PoleSpec::real_poles(cfg.controller_poles),
            mbss::design::PoleSpec::real_poles(cfg.observer_poles), q, cfg.r_weight);
        const auto mode = linear ? mbss::sim::Mode::Linear : mbss::sim::Mode::Nonlinear;

        mbss::sim::SimTrace trace;
        switch (scenario) {
            case Scenario::LinearFeedback:
                trace = mbss::sim::simulate_linear_feedback(ss, *gains.state_feedback, sim_cfg);
                break;
            case Scenario::NonlinearFeedback:
                trace = mbss::sim::simulate_nonlinear_feedback(cfg.plant, eq,
                                                               *gains.state_feedback, sim_cfg);
                break;
            case Scenario::LinearObserver:
            case Scenario::NonlinearObserver:
                trace = mbss::sim::simulate_with_observer(mode, ss, cfg.plant, eq,
                                                          *gains.state_feedback,
                                                          *gains.observer, sim_cfg);
                break;
            case Scenario::LinearLqr:
            case Scenario::NonlinearLqr:
                trace = mbss::sim::simulate_lqr(mode, ss, cfg.plant, eq, *gains.lqr, sim_cfg);
                break;
        }

        const std::string path = cfg.output_path.empty() ? "trace.csv" : cfg.output_path;
        write_trace_csv(trace, path);

        const double y_ref = linear ? 0.0 : eq.state.position;
        double peak = 0.0;
        for (double y : trace.y) peak = std::max(peak, std::abs(y - y_ref));
        const double band = 0.01 * peak;
        std::size_t settle_idx = 0;
        for (std::size_t i = trace.size(); i-- > 0;) {
            if (std::abs(trace.y[i] - y_ref) > band) {
                settle_idx = i + 1;
                break;
            }
        }

        char buf[160];
        out << "scenario: " << scenario_name(scenario) << "\n";
        out << "rows: " << trace.size() << "\n";
        out << "wrote " << path << "\n";
        std::snprintf(buf, sizeof buf, "peak |y - %.12g|: %.12g m\n", y_ref, peak);
        out << buf;
        if (settle_idx < trace.size()) {
            std::snprintf(buf, sizeof buf, "settling time (1%% of peak band): %.12g s\n",
                          trace.t[settle_idx]);
            out << buf;
        } else {
            out << "settling time (1% of peak band): not settled\n";
        }
        if (trace.contact_time) {
            std::snprintf(buf, sizeof buf,
                          "truncated: ball contact at t = %.12g s (partial trace written)\n",
                          *trace.contact_time);
            out << buf;
            return 3;
        }
        out << "truncated: no\n";
        return 0;
    });
}

} // namespace mbssctl
