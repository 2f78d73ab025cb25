#include "mbss/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "mbss/errors.hpp"

namespace mbss::sim {

namespace {

using Vec3 = std::array<double, 3>;
using Vec6 = std::array<double, 6>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 to_mat3(const numkit::Matrix& m) {
    if (m.rows() != 3 || m.cols() != 3)
        throw std::invalid_argument("sim: expected a 3x3 matrix");
    Mat3 out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out[i][j] = m(i, j);
    return out;
}

Vec3 column3(const numkit::Matrix& m) {
    if (m.rows() != 3 || m.cols() != 1)
        throw std::invalid_argument("sim: expected a 3x1 column");
    return Vec3{m(0, 0), m(1, 0), m(2, 0)};
}

Vec3 row3(const numkit::Matrix& m) {
    if (m.rows() != 1 || m.cols() != 3)
        throw std::invalid_argument("sim: expected a 1x3 row gain");
    return Vec3{m(0, 0), m(0, 1), m(0, 2)};
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 matvec(const Mat3& m, const Vec3& x) {
    return Vec3{dot3(m[0], x), dot3(m[1], x), dot3(m[2], x)};
}

void require_valid(const SimConfig& cfg) {
    const auto errors = validate(cfg);
    if (!errors.empty()) {
        std::string msg = "sim config:";
        for (const auto& e : errors) msg += " " + e + ";";
        throw std::invalid_argument(msg);
    }
}

void push_row(SimTrace& tr, double t, const Vec3& x, double u, double y) {
    tr.t.push_back(t);
    tr.x1.push_back(x[0]);
    tr.x2.push_back(x[1]);
    tr.x3.push_back(x[2]);
    tr.u.push_back(u);
    tr.y.push_back(y);
}

void push_estimate(SimTrace& tr, const Vec3& xh) {
    tr.xh1.push_back(xh[0]);
    tr.xh2.push_back(xh[1]);
    tr.xh3.push_back(xh[2]);
}

void reserve(SimTrace& tr, std::size_t rows, bool with_estimate) {
    tr.t.reserve(rows);
    tr.x1.reserve(rows);
    tr.x2.reserve(rows);
    tr.x3.reserve(rows);
    tr.u.reserve(rows);
    tr.y.reserve(rows);
    if (with_estimate) {
        tr.xh1.reserve(rows);
        tr.xh2.reserve(rows);
        tr.xh3.reserve(rows);
    }
}

bool finite3(const Vec3& x) {
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

Vec3 plant_rhs(const Vec3& x, double u, const plant::PlantParams& p) {
    const auto d = plant::dynamics(plant::StateVector{x[0], x[1], x[2]}, u, p);
    return Vec3{d.position, d.velocity, d.current};
}

} // namespace

std::vector<std::string> validate(const SimConfig& cfg) {
    std::vector<std::string> errors;
    if (!std::isfinite(cfg.dt) || !(cfg.dt > 0.0) || cfg.dt > 0.01)
        errors.push_back("sim.dt must satisfy 0 < dt <= 0.01");
    if (!std::isfinite(cfg.t_final) || !(cfg.t_final > 0.0))
        errors.push_back("sim.t_final must be > 0");
    else if (cfg.dt > 0.0 && cfg.t_final / cfg.dt > 1e7)
        errors.push_back("sim.t_final/dt must be <= 1e7");
    if (!std::isfinite(cfg.v_ref))
        errors.push_back("sim.v_ref must be finite");
    for (double v : cfg.x0)
        if (!std::isfinite(v)) {
            errors.push_back("sim.x0 must be finite");
            break;
        }
    for (double v : cfg.xhat0)
        if (!std::isfinite(v)) {
            errors.push_back("sim.xhat0 must be finite");
            break;
        }
    return errors;
}

std::size_t step_count(const SimConfig& cfg) {
    // Nudged so exact-ratio grids (50 / 1e-4) are not lost to division roundoff.
    const double q = (cfg.t_final / cfg.dt) * (1.0 + 1e-12) + 1e-12;
    return static_cast<std::size_t>(std::floor(q));
}

SimTrace simulate_linear_feedback(const lti::StateSpace& ss, const numkit::Matrix& k_fb,
                                  const SimConfig& cfg) {
    require_valid(cfg);
    const Mat3 a = to_mat3(ss.A);
    const Vec3 b = column3(ss.B);
    const Vec3 c = row3(ss.C);
    const Vec3 k = row3(k_fb);

    const std::size_t steps = step_count(cfg);
    SimTrace tr;
    reserve(tr, steps + 1, false);

    Vec3 x = cfg.x0;
    auto rhs = [&](const Vec3& z, double u) {
        Vec3 d = matvec(a, z);
        for (std::size_t i = 0; i < 3; ++i) d[i] += b[i] * u;
        return d;
    };

    for (std::size_t kstep = 0;; ++kstep) {
        const double u = dot3(k, x) + cfg.v_ref;
        push_row(tr, static_cast<double>(kstep) * cfg.dt, x, u, dot3(c, x));
        if (kstep == steps) break;
        x = rk4_step(rhs, x, u, cfg.dt);
    }
    return tr;
}

SimTrace simulate_nonlinear_feedback(const plant::PlantParams& p,
                                     const plant::EquilibriumPoint& eq,
                                     const numkit::Matrix& k_fb, const SimConfig& cfg) {
    require_valid(cfg);
    if (cfg.x0[0] <= 0.0)
        throw DomainError("simulate_nonlinear_feedback: initial x1 must be > 0");
    const Vec3 k = row3(k_fb);
    const Vec3 xeq{eq.state.position, eq.state.velocity, eq.state.current};

    const std::size_t steps = step_count(cfg);
    SimTrace tr;
    reserve(tr, steps + 1, false);

    Vec3 x = cfg.x0;
    auto rhs = [&](const Vec3& z, double u) { return plant_rhs(z, u, p); };

    for (std::size_t kstep = 0;; ++kstep) {
        const Vec3 dev{x[0] - xeq[0], x[1] - xeq[1], x[2] - xeq[2]};
        const double u = eq.input_E + dot3(k, dev) + cfg.v_ref;
        push_row(tr, static_cast<double>(kstep) * cfg.dt, x, u, x[0]);
        if (kstep == steps) break;
        try {
            const Vec3 xn = rk4_step(rhs, x, u, cfg.dt);
            if (!finite3(xn))
                throw NoConvergence("simulate_nonlinear_feedback: state diverged at t = " +
                                    std::to_string((kstep + 1) * cfg.dt));
            if (xn[0] <= 0.0) {
                tr.contact_time = static_cast<double>(kstep + 1) * cfg.dt;
                break;
            }
            x = xn;
        } catch (const DomainError&) {
            tr.contact_time = static_cast<double>(kstep + 1) * cfg.dt;
            break;
        }
    }
    return tr;
}

SimTrace simulate_with_observer(Mode mode, const lti::StateSpace& ss,
                                const plant::PlantParams& p,
                                const plant::EquilibriumPoint& eq,
                                const numkit::Matrix& k_fb, const numkit::Matrix& g_obs,
                                const SimConfig& cfg) {
    require_valid(cfg);
    const Mat3 a = to_mat3(ss.A);
    const Vec3 b = column3(ss.B);
    const Vec3 c = row3(ss.C);
    const Vec3 k = row3(k_fb);
    const Vec3 g = column3(g_obs);

    const std::size_t steps = step_count(cfg);
    SimTrace tr;
    reserve(tr, steps + 1, true);

    if (mode == Mode::Linear) {
        // Joint state (Dx, xh), both in deviation coordinates.
        Vec6 z{cfg.x0[0], cfg.x0[1], cfg.x0[2], cfg.xhat0[0], cfg.xhat0[1], cfg.xhat0[2]};
        auto rhs = [&](const Vec6& s, double du) {
            const Vec3 xp{s[0], s[1], s[2]};
            const Vec3 xh{s[3], s[4], s[5]};
            const Vec3 dp = matvec(a, xp);
            const Vec3 dh = matvec(a, xh);
            // Innovation form: xh' = A xh + B du + G (C xh - C Dx).
            const double innov = dot3(c, xh) - dot3(c, xp);
            Vec6 out{};
            for (std::size_t i = 0; i < 3; ++i) {
                out[i] = dp[i] + b[i] * du;
                out[3 + i] = dh[i] + b[i] * du + g[i] * innov;
            }
            return out;
        };
        for (std::size_t kstep = 0;; ++kstep) {
            const Vec3 xp{z[0], z[1], z[2]};
            const Vec3 xh{z[3], z[4], z[5]};
            const double du = dot3(k, xh) + cfg.v_ref;
            push_row(tr, static_cast<double>(kstep) * cfg.dt, xp, du, dot3(c, xp));
            push_estimate(tr, xh);
            if (kstep == steps) break;
            z = rk4_step(rhs, z, du, cfg.dt);
        }
        return tr;
    }

    // Nonlinear mode: absolute plant state co-integrated with the observer in
    // deviation coordinates; the measured output enters as Dy = y - x1_eq.
    if (cfg.x0[0] <= 0.0)
        throw DomainError("simulate_with_observer: initial x1 must be > 0");
    const Vec3 xeq{eq.state.position, eq.state.velocity, eq.state.current};
    Vec6 z{cfg.x0[0], cfg.x0[1], cfg.x0[2], cfg.xhat0[0], cfg.xhat0[1], cfg.xhat0[2]};
    auto rhs = [&](const Vec6& s, double u) {
        const Vec3 xp{s[0], s[1], s[2]};
        const Vec3 xh{s[3], s[4], s[5]};
        const Vec3 dp = plant_rhs(xp, u, p);
        const Vec3 dh = matvec(a, xh);
        const double du = u - eq.input_E;
        const double dy = xp[0] - xeq[0];
        const double innov = dot3(c, xh) - dy;
        Vec6 out{};
        for (std::size_t i = 0; i < 3; ++i) {
            out[i] = dp[i];
            out[3 + i] = dh[i] + b[i] * du + g[i] * innov;
        }
        return out;
    };
    for (std::size_t kstep = 0;; ++kstep) {
        const Vec3 xp{z[0], z[1], z[2]};
        const Vec3 xh{z[3], z[4], z[5]};
        const double u = eq.input_E + dot3(k, xh) + cfg.v_ref;
        push_row(tr, static_cast<double>(kstep) * cfg.dt, xp, u, xp[0]);
        // Estimate recorded in the same (absolute) frame as the state columns.
        push_estimate(tr, Vec3{xh[0] + xeq[0], xh[1] + xeq[1], xh[2] + xeq[2]});
        if (kstep == steps) break;
        try {
            const Vec6 zn = rk4_step(rhs, z, u, cfg.dt);
            bool ok = true;
            for (double v : zn) ok = ok && std::isfinite(v);
            if (!ok)
                throw NoConvergence("simulate_with_observer: state diverged at t = " +
                                    std::to_string((kstep + 1) * cfg.dt));
            if (zn[0] <= 0.0) {
                tr.contact_time = static_cast<double>(kstep + 1) * cfg.dt;
                break;
            }
            z = zn;
        } catch (const DomainError&) {
            tr.contact_time = static_cast<double>(kstep + 1) * cfg.dt;
            break;
        }
    }
    return tr;
}

SimTrace simulate_lqr(Mode mode, const lti::StateSpace& ss, const plant::PlantParams& p,
                      const plant::EquilibriumPoint& eq, const numkit::Matrix& k_lqr,
                      const SimConfig& cfg) {
    require_valid(cfg);
    const Vec3 k = row3(k_lqr);

    const std::size_t steps = step_count(cfg);
    SimTrace tr;
    reserve(tr, steps + 1, false);

    if (mode == Mode::Linear) {
        const Mat3 a = to_mat3(ss.A);
        const Vec3 b = column3(ss.B);
        const Vec3 c = row3(ss.C);
        Vec3 x = cfg.x0;
        auto rhs = [&](const Vec3& z, double u) {
            Vec3 d = matvec(a, z);
            for (std::size_t i = 0; i < 3; ++i) d[i] += b[i] * u;
            return d;
        };
        for (std::size_t kstep = 0;; ++kstep) {
            const double u = -dot3(k, x);
            push_row(tr, static_cast<double>(kstep) * cfg.dt, x, u, dot3(c, x));
            if (kstep == steps) break;
            x = rk4_step(rhs, x, u, cfg.dt);
        }
        return tr;
    }

    if (cfg.x0[0] <= 0.0)
        throw DomainError("simulate_lqr: initial x1 must be > 0");
    const Vec3 xeq{eq.state.position, eq.state.velocity, eq.state.current};
    Vec3 x = cfg.x0;
    auto rhs = [&](const Vec3& z, double u) { return plant_rhs(z, u, p); };
    for (std::size_t kstep = 0;; ++kstep) {
        const Vec3 dev{x[0] - xeq[0], x[1] - xeq[1], x[2] - xeq[2]};
        const double u = eq.input_E - dot3(k, dev);
        push_row(tr, static_cast<double>(kstep) * cfg.dt, x, u, x[0]);
        if (kstep == steps) break;
        try {
            const Vec3 xn = rk4_step(rhs, x, u, cfg.dt);
            if (!finite3(xn))
                throw NoConvergence("simulate_lqr: state diverged at t = " +
                                    std::to_string((kstep + 1) * cfg.dt));
            if (xn[0] <= 0.0) {
                tr.contact_time = static_cast<double>(kstep + 1) * cfg.dt;
                break;
            }
            x = xn;
        } catch (const DomainError&) {
            tr.contact_time = static_cast<double>(kstep + 1) * cfg.dt;
            break;
        }
    }
    return tr;
}

} // namespace mbss::sim
