#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "mbss/matrix.hpp"
#include "mbss/plant.hpp"

namespace mbss::lti {

// Linear time-invariant model in deviation coordinates around op_point.
struct StateSpace {
    numkit::Matrix A;
    numkit::Matrix B;
    numkit::Matrix C;
    numkit::Matrix D;
    std::optional<plant::EquilibriumPoint> op_point;

    StateSpace(numkit::Matrix a, numkit::Matrix b, numkit::Matrix c, numkit::Matrix d,
               std::optional<plant::EquilibriumPoint> op = std::nullopt);

    std::size_t order() const { return A.rows(); }
    std::size_t inputs() const { return B.cols(); }
    std::size_t outputs() const { return C.rows(); }
};

using DynamicsFn = std::function<plant::StateVector(const plant::StateVector&, double)>;

// Central-difference Jacobian of f at (x0, u0); the step for each direction
// is h scaled by max(1, |component|). Independent cross-check for the
// closed-form partials.
plant::Jacobian numeric_jacobian(const DynamicsFn& f, const plant::StateVector& x0,
                                 double u0, double h = 1e-6);

// Deviation model at an equilibrium: (A, B) from the closed-form Jacobian,
// C = [1 0 0] (position is the measured output), D = [0].
StateSpace linearize(const plant::PlantParams& p, const plant::EquilibriumPoint& eq);

// [B, AB, A^2 B, ..., A^(n-1) B]
numkit::Matrix controllability_matrix(const numkit::Matrix& a, const numkit::Matrix& b);
numkit::Matrix controllability_matrix(const StateSpace& ss);

// Rows [C; CA; ...; C A^(n-1)]
numkit::Matrix observability_matrix(const numkit::Matrix& a, const numkit::Matrix& c);
numkit::Matrix observability_matrix(const StateSpace& ss);

struct RankTest {
    bool full_rank = false;
    std::size_t rank = 0;
};

RankTest is_controllable(const StateSpace& ss);
RankTest is_observable(const StateSpace& ss);

// True iff every eigenvalue satisfies re < -1e-9; anything on the
// imaginary axis counts as not stable.
bool is_stable(const numkit::Matrix& a);

} // namespace mbss::lti
