#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "mbss/lti.hpp"
#include "mbss/matrix.hpp"
#include "mbss/polynomial.hpp"

namespace mbss::design {

// Desired closed-loop pole set. Must be closed under conjugation for a
// real gain to exist; stabilizing designs need every pole in the open
// left half plane.
struct PoleSpec {
    std::vector<numkit::ComplexRoot> poles;

    static PoleSpec real_poles(std::initializer_list<double> p);
    static PoleSpec real_poles(const std::vector<double>& p);

    bool conjugate_closed(double tol = 1e-8) const;
    bool strictly_stable() const;
    std::size_t size() const { return poles.size(); }
};

// Gains produced by the synthesis routines, each with its own sign
// convention (kept as designed, never normalized):
//   state_feedback K: 1xn,  u = K x + v,    eig(A + B K) = controller spec
//   observer G:       nx1,  xh' = (A + G C) xh + B u - G y
//   lqr K:            1xn,  u = -K x
struct GainSet {
    std::optional<numkit::Matrix> state_feedback;
    std::optional<numkit::Matrix> observer;
    std::optional<numkit::Matrix> lqr;
};

struct CareSolution {
    numkit::Matrix S;     // stabilizing Riccati solution, symmetric PSD
    numkit::Matrix K_lqr; // 1xn, u = -K x
    int iterations = 0;
    double residual = 0.0; // ||S A + A^T S + Q - S B R^-1 B^T S||_inf
};

// Companion realization of a monic characteristic polynomial:
// ones on the superdiagonal, last row [-a0, -a1, ..., -a_{n-1}], B = e_n.
std::pair<numkit::Matrix, numkit::Matrix> canonical_form(const numkit::Polynomial& p);

// Monic real coefficients of prod(s - p_i).
// Throws ComplexCoefficients when the spec is not conjugate-closed.
numkit::Polynomial desired_poly(const PoleSpec& spec);

// Feedback gain by the controllable-canonical-form procedure:
// phi from char_poly, companion realization, desired polynomial,
// T_c = Ctrb(A,B) * Ctrb(A_c,B_c)^-1, K_c by coefficient subtraction,
// K = K_c * T_c^-1.  Convention u = K x + v, so eig(A + B K) = spec.
numkit::Matrix place_poles(const numkit::Matrix& a, const numkit::Matrix& b,
                           const PoleSpec& spec);
numkit::Matrix place_poles(const lti::StateSpace& ss, const PoleSpec& spec);

// Full-order observer gain by duality: G = place_poles(A^T, C^T, spec)^T,
// so eig(A + G C) = spec.
numkit::Matrix observer_gain(const lti::StateSpace& ss, const PoleSpec& spec);

// Solves M^T S + S M = -W through the n^2-dimensional Kronecker system.
// Requires the spectra of M and -M^T disjoint (holds for stable M).
numkit::Matrix solve_lyapunov(const numkit::Matrix& m, const numkit::Matrix& w);

// Stabilizing solution of S A + A^T S + Q - S B R^-1 B^T S = 0 by
// Kleinman-Newton iteration: successive Lyapunov solves from a stabilizing
// seed gain (pole placement when A is unstable, zero otherwise), stopping
// when ||S_{j+1} - S_j||_inf < 1e-10 or after 100 iterations.
CareSolution solve_care(const lti::StateSpace& ss, const numkit::Matrix& q, double r_weight);

// K = R^-1 B^T S for the control law u = -K x.
numkit::Matrix lqr_gain(const CareSolution& sol, const lti::StateSpace& ss, double r_weight);

// Runs all three syntheses against one model and collects the gains.
GainSet synthesize(const lti::StateSpace& ss, const PoleSpec& controller,
                   const PoleSpec& observer, const numkit::Matrix& q, double r_weight);

} // namespace mbss::design
