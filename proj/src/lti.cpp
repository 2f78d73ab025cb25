#include "mbss/lti.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mbss/errors.hpp"
#include "mbss/polynomial.hpp"

namespace mbss::lti {

StateSpace::StateSpace(numkit::Matrix a, numkit::Matrix b, numkit::Matrix c, numkit::Matrix d,
                       std::optional<plant::EquilibriumPoint> op)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), op_point(std::move(op)) {
    if (!A.square())
        throw std::invalid_argument("StateSpace: A must be square");
    if (B.rows() != A.rows())
        throw std::invalid_argument("StateSpace: B row count must match A");
    if (C.cols() != A.cols())
        throw std::invalid_argument("StateSpace: C column count must match A");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw std::invalid_argument("StateSpace: D must be outputs x inputs");
}

plant::Jacobian numeric_jacobian(const DynamicsFn& f, const plant::StateVector& x0,
                                 double u0, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("numeric_jacobian: h must be > 0");

    auto pack = [](const plant::StateVector& s) {
        return std::array<double, 3>{s.position, s.velocity, s.current};
    };
    auto unpack = [](const std::array<double, 3>& a) {
        return plant::StateVector{a[0], a[1], a[2]};
    };

    const std::array<double, 3> base = pack(x0);
    numkit::Matrix a(3, 3);
    numkit::Matrix b(3, 1);

    for (std::size_t j = 0; j < 3; ++j) {
        const double step = h * std::max(1.0, std::abs(base[j]));
        std::array<double, 3> hi = base, lo = base;
        hi[j] += step;
        lo[j] -= step;
        const auto fhi = pack(f(unpack(hi), u0));
        const auto flo = pack(f(unpack(lo), u0));
        for (std::size_t i = 0; i < 3; ++i)
            a(i, j) = (fhi[i] - flo[i]) / (2.0 * step);
    }

    const double ustep = h * std::max(1.0, std::abs(u0));
    const auto fhi = pack(f(x0, u0 + ustep));
    const auto flo = pack(f(x0, u0 - ustep));
    for (std::size_t i = 0; i < 3; ++i)
        b(i, 0) = (fhi[i] - flo[i]) / (2.0 * ustep);

    return plant::Jacobian{a, b};
}

StateSpace linearize(const plant::PlantParams& p, const plant::EquilibriumPoint& eq) {
    if (eq.degenerate)
        throw DomainError("linearize: degenerate equilibrium (E <= 0) cannot be linearized");
    auto jac = plant::analytic_jacobian(eq, p);
    numkit::Matrix c = numkit::Matrix::row_vector({1.0, 0.0, 0.0});
    numkit::Matrix d(1, 1);
    return StateSpace(std::move(jac.A), std::move(jac.B), std::move(c), std::move(d), eq);
}

numkit::Matrix controllability_matrix(const numkit::Matrix& a, const numkit::Matrix& b) {
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    numkit::Matrix out(n, n * m);
    numkit::Matrix block = b;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                out(i, k * m + j) = block(i, j);
        if (k + 1 < n) block = a * block;
    }
    return out;
}

numkit::Matrix controllability_matrix(const StateSpace& ss) {
    return controllability_matrix(ss.A, ss.B);
}

numkit::Matrix observability_matrix(const numkit::Matrix& a, const numkit::Matrix& c) {
    const std::size_t n = a.rows();
    const std::size_t p = c.rows();
    numkit::Matrix out(n * p, n);
    numkit::Matrix block = c;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(k * p + i, j) = block(i, j);
        if (k + 1 < n) block = block * a;
    }
    return out;
}

numkit::Matrix observability_matrix(const StateSpace& ss) {
    return observability_matrix(ss.A, ss.C);
}

RankTest is_controllable(const StateSpace& ss) {
    const std::size_t r = numkit::rank(controllability_matrix(ss));
    return RankTest{r == ss.order(), r};
}

RankTest is_observable(const StateSpace& ss) {
    const std::size_t r = numkit::rank(observability_matrix(ss));
    return RankTest{r == ss.order(), r};
}

bool is_stable(const numkit::Matrix& a) {
    for (const auto& ev : numkit::eigenvalues(a))
        if (ev.re >= -1e-9) return false;
    return true;
}

} // namespace mbss::lti
