#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mbss/lti.hpp"
#include "mbss/matrix.hpp"
#include "mbss/plant.hpp"

namespace mbss::sim {

enum class Mode { Linear, Nonlinear };

// Linear scenarios integrate the deviation model, so x0 is a deviation from
// the operating point; nonlinear scenarios integrate the full plant, so x0
// is an absolute state. xhat0 is the observer's initial deviation estimate.
struct SimConfig {
    double dt = 1e-4;      // s
    double t_final = 50.0; // s
    double v_ref = 0.0;    // external input v of the feedback law [V]
    std::array<double, 3> x0{0.0, 0.0, 0.0};
    std::array<double, 3> xhat0{0.0, 0.0, 0.0};
};

// Violations of 0 < dt <= 0.01, t_final > 0, t_final/dt <= 1e7.
std::vector<std::string> validate(const SimConfig& cfg);

// Number of integration steps; rows recorded = steps + 1.
std::size_t step_count(const SimConfig& cfg);

// Column-oriented record of one run. Estimate columns are filled only by
// observer scenarios (in the same frame as the state columns). If the ball
// reached the magnet face, contact_time is set and the trace ends at the
// last valid row.
struct SimTrace {
    std::vector<double> t, x1, x2, x3, u, y;
    std::vector<double> xh1, xh2, xh3;
    std::optional<double> contact_time;

    bool has_estimate() const { return !xh1.empty(); }
    std::size_t size() const { return t.size(); }
};

namespace detail {

template <std::size_t N>
std::array<double, N> axpy(const std::array<double, N>& x, double a,
                           const std::array<double, N>& d) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + a * d[i];
    return out;
}

} // namespace detail

// Classical 4-stage Runge-Kutta update with the input held constant over
// the step (zero-order hold).
template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, const std::array<double, N>& x, double u, double dt) {
    const auto k1 = f(x, u);
    const auto k2 = f(detail::axpy(x, dt / 2.0, k1), u);
    const auto k3 = f(detail::axpy(x, dt / 2.0, k2), u);
    const auto k4 = f(detail::axpy(x, dt, k3), u);
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i)
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Closed loop Dx' = (A + B K) Dx + B v from Dx0; records u = K Dx + v, y = C Dx.
SimTrace simulate_linear_feedback(const lti::StateSpace& ss, const numkit::Matrix& k_fb,
                                  const SimConfig& cfg);

// Full nonlinear plant under deviation feedback u = E + K (x - x_eq) + v.
SimTrace simulate_nonlinear_feedback(const plant::PlantParams& p,
                                     const plant::EquilibriumPoint& eq,
                                     const numkit::Matrix& k_fb, const SimConfig& cfg);

// Plant (deviation model or full nonlinear dynamics) co-integrated with the
// full-order observer xh' = A xh + B Du + G (C xh - Dy), driven by the
// measured output mapped to deviation coordinates. The control uses the
// estimate: u = K xh + v (linear) or u = E + K xh + v (nonlinear).
SimTrace simulate_with_observer(Mode mode, const lti::StateSpace& ss,
                                const plant::PlantParams& p,
                                const plant::EquilibriumPoint& eq,
                                const numkit::Matrix& k_fb, const numkit::Matrix& g_obs,
                                const SimConfig& cfg);

// Optimal state feedback u = -K Dx (linear) or u = E - K (x - x_eq) (nonlinear).
SimTrace simulate_lqr(Mode mode, const lti::StateSpace& ss, const plant::PlantParams& p,
                      const plant::EquilibriumPoint& eq, const numkit::Matrix& k_lqr,
                      const SimConfig& cfg);

} // namespace mbss::sim
