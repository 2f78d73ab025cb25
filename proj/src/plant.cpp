#include "mbss/plant.hpp"

#include <cmath>

#include "mbss/errors.hpp"

namespace mbss::plant {

namespace {

// Truncate toward zero at the decimal precision the reference design
// tables carry: one decimal for magnitudes in [10, 100), two otherwise.
// The epsilon absorbs binary representation error before truncating.
double truncate_display(double v) {
    const double a = std::abs(v);
    const double q = (a >= 10.0 && a < 100.0) ? 10.0 : 100.0;
    return std::trunc(v * q + std::copysign(1e-6, v)) / q;
}

} // namespace

std::vector<std::string> validate(const PlantParams& p) {
    std::vector<std::string> errors;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            errors.push_back(std::string("plant.") + name + " must be strictly positive");
    };
    positive(p.mass_M, "M");
    positive(p.force_const_K, "K");
    positive(p.inductance_L, "L");
    positive(p.resistance_R, "R");
    positive(p.gravity_g, "g");
    if (!std::isfinite(p.nominal_E) || p.nominal_E < 0.0)
        errors.push_back("plant.E must be finite and non-negative");
    else if (p.nominal_E == 0.0)
        errors.push_back("plant.E: degenerate equilibrium (zero input gives the contact state)");
    return errors;
}

StateVector dynamics(const StateVector& x, double u, const PlantParams& p) {
    if (x.position <= 0.0)
        throw DomainError("dynamics: x1 <= 0 (magnet contact singularity)");
    StateVector d;
    d.position = x.velocity;
    d.velocity = p.gravity_g -
                 p.force_const_K * x.current * x.current /
                     (p.mass_M * x.position * x.position);
    d.current = (x.position / p.inductance_L) * (u - p.resistance_R * x.current);
    return d;
}

double output(const StateVector& x) { return x.position; }

EquilibriumPoint equilibrium(const PlantParams& p, bool use_paper_rounding) {
    EquilibriumPoint eq;
    eq.input_E = p.nominal_E;
    if (p.nominal_E <= 0.0) {
        eq.degenerate = true;
        return eq; // contact state (0, 0, 0)
    }
    const double i0 = p.nominal_E / p.resistance_R;
    double y0 = i0 * std::sqrt(p.force_const_K / (p.mass_M * p.gravity_g));
    if (use_paper_rounding) {
        y0 = std::round(y0 * 100.0) / 100.0;
        eq.paper_rounded = true;
    }
    eq.state = StateVector{y0, 0.0, i0};
    return eq;
}

Jacobian analytic_jacobian(const EquilibriumPoint& eq, const PlantParams& p) {
    const double y0 = eq.state.position;
    const double i0 = eq.state.current;
    if (y0 <= 0.0)
        throw DomainError("analytic_jacobian: x1 <= 0 (degenerate operating point)");

    numkit::Matrix a(3, 3);
    numkit::Matrix b(3, 1);
    a(0, 1) = 1.0;
    a(1, 0) = 2.0 * p.force_const_K * i0 * i0 / (p.mass_M * y0 * y0 * y0);
    a(1, 2) = -2.0 * p.force_const_K * i0 / (p.mass_M * y0 * y0);
    a(2, 0) = (eq.input_E - p.resistance_R * i0) / p.inductance_L;
    a(2, 2) = -p.resistance_R * y0 / p.inductance_L;
    b(2, 0) = y0 / p.inductance_L;

    if (eq.paper_rounded) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) a(i, j) = truncate_display(a(i, j));
            b(i, 0) = truncate_display(b(i, 0));
        }
    }
    return Jacobian{a, b};
}

} // namespace mbss::plant
