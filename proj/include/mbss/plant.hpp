#pragma once

#include <string>
#include <vector>

#include "mbss/matrix.hpp"

namespace mbss::plant {

// Physical constants of the suspension rig. The electromagnet constant
// force_const_K is unrelated to any feedback gain named K elsewhere.
struct PlantParams {
    double mass_M = 0.2;         // kg
    double force_const_K = 0.01; // N*m^2/A^2
    double inductance_L = 0.5;   // H
    double resistance_R = 10.0;  // ohm
    double gravity_g = 9.8;      // m/s^2
    double nominal_E = 8.0;      // V
};

// Violation messages; empty means the parameter set is usable.
// nominal_E == 0 is reported as a degenerate (contact) equilibrium.
std::vector<std::string> validate(const PlantParams& p);

// x1 = ball position y [m], x2 = velocity [m/s], x3 = coil current [A].
// Doubles as the state derivative (m/s, m/s^2, A/s).
struct StateVector {
    double position = 0.0;
    double velocity = 0.0;
    double current = 0.0;
};

struct EquilibriumPoint {
    StateVector state;
    double input_E = 0.0;
    // E <= 0 collapses the hover point onto the magnet face; such a point
    // is reported, never linearized.
    bool degenerate = false;
    // Carries the coarsely rounded operating point (position rounded to
    // two decimals) and display-truncated model matrices downstream, so the
    // classic hand-computed design tables are reproduced digit for digit.
    bool paper_rounded = false;
};

// Right-hand side of the suspension dynamics:
//   dx1 = x2
//   dx2 = g - K*x3^2 / (M*x1^2)
//   dx3 = (x1/L) * (u - R*x3)
// Throws DomainError when x1 <= 0 (ball at or past the magnet face).
StateVector dynamics(const StateVector& x, double u, const PlantParams& p);

// Measured output: ball position x1.
double output(const StateVector& x);

// Hover point for the nominal input: x3 = E/R, x1 = (E/R)*sqrt(K/(M*g)).
// The derivatives vanish there to within roundoff (exact mode).
EquilibriumPoint equilibrium(const PlantParams& p, bool use_paper_rounding = false);

struct Jacobian {
    numkit::Matrix A; // 3x3
    numkit::Matrix B; // 3x1
};

// Closed-form partial derivatives of the dynamics at an operating point:
//   A = [[0, 1, 0],
//        [2K*x3^2/(M*x1^3), 0, -2K*x3/(M*x1^2)],
//        [(E - R*x3)/L,     0, -R*x1/L]],  B = [0, 0, x1/L]^T.
// A(3,1) vanishes at a true equilibrium since there E = R*x3.
// With paper_rounded set, entries are truncated to the display precision
// carried by the reference tables.
Jacobian analytic_jacobian(const EquilibriumPoint& eq, const PlantParams& p);

} // namespace mbss::plant
