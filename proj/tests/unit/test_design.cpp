#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "mbss/design.hpp"
#include "mbss/errors.hpp"
#include "mbss/lti.hpp"
#include "mbss/polynomial.hpp"

using namespace mbss;
using design::PoleSpec;
using numkit::Matrix;

namespace {

lti::StateSpace rounded_model() {
    const plant::PlantParams p;
    return lti::linearize(p, plant::equilibrium(p, true));
}

lti::StateSpace scalar_system(double a, double b) {
    return lti::StateSpace(Matrix{{a}}, Matrix{{b}}, Matrix{{1.0}}, Matrix(1, 1));
}

void check_eigs(const Matrix& m, const std::vector<double>& want, double tol) {
    const auto eigs = numkit::eigenvalues(m);
    std::vector<double> sorted = want;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(eigs.size() == sorted.size());
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        CHECK(std::abs(eigs[i].re - sorted[i]) < tol);
        CHECK(std::abs(eigs[i].im) < tol);
    }
}

// Cost of u = -K x for dx = A x + B u from x0, fixed-step RK4 over [0, T].
// Local brute-force integrator, kept independent of the sim module.
double rollout_cost(const Matrix& a, const Matrix& b, const Matrix& k, const Matrix& q,
                    double r, std::vector<double> x0, double t_final, double dt) {
    const std::size_t n = x0.size();
    auto deriv = [&](const std::vector<double>& x) {
        double u = 0.0;
        for (std::size_t j = 0; j < n; ++j) u -= k(0, j) * x[j];
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[i] += a(i, j) * x[j];
            d[i] += b(i, 0) * u;
        }
        return d;
    };
    auto integrand = [&](const std::vector<double>& x) {
        double u = 0.0, acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) u -= k(0, j) * x[j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) acc += x[i] * q(i, j) * x[j];
        return acc + r * u * u;
    };

    double cost = 0.0;
    std::vector<double> x = std::move(x0);
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    for (std::size_t s = 0; s < steps; ++s) {
        const double f0 = integrand(x);
        auto addscaled = [&](const std::vector<double>& base, double h,
                             const std::vector<double>& d) {
            std::vector<double> out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + h * d[i];
            return out;
        };
        const auto k1 = deriv(x);
        const auto k2 = deriv(addscaled(x, dt / 2, k1));
        const auto k3 = deriv(addscaled(x, dt / 2, k2));
        const auto k4 = deriv(addscaled(x, dt, k3));
        for (std::size_t i = 0; i < n; ++i)
            x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        cost += 0.5 * dt * (f0 + integrand(x));
    }
    return cost;
}

} // namespace

TEST_CASE("canonical_form: worked table and n=1") {
    const auto phi = numkit::char_poly(rounded_model().A);
    const auto [a_c, b_c] = design::canonical_form(phi);
    CHECK(a_c(0, 1) == 1.0);
    CHECK(a_c(1, 2) == 1.0);
    CHECK(a_c(2, 0) == doctest::Approx(355.548).epsilon(1e-9));
    CHECK(a_c(2, 1) == doctest::Approx(296.29).epsilon(1e-9));
    CHECK(a_c(2, 2) == doctest::Approx(-1.2).epsilon(1e-9));
    CHECK(b_c(0, 0) == 0.0);
    CHECK(b_c(1, 0) == 0.0);
    CHECK(b_c(2, 0) == 1.0);

    const auto [a1, b1] = design::canonical_form(numkit::Polynomial{1.0, 4.0}); // s + 4
    CHECK(a1(0, 0) == -4.0);
    CHECK(b1(0, 0) == 1.0);

    CHECK_THROWS_AS(design::canonical_form(numkit::Polynomial{2.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("property: canonical form round-trips through char_poly") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> coeffs{1.0};
        const std::size_t deg = 1 + rep % 5;
        for (std::size_t i = 0; i < deg; ++i) coeffs.push_back(dist(rng));
        const numkit::Polynomial p{std::vector<double>(coeffs)};
        const auto [a_c, b_c] = design::canonical_form(p);
        const auto back = numkit::char_poly(a_c);
        REQUIRE(back.coeffs().size() == coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            CHECK(back.coeffs()[i] ==
                  doctest::Approx(coeffs[i]).epsilon(1e-9).scale(std::abs(coeffs[i]) + 1.0));
    }
}

TEST_CASE("desired_poly: expansions and conjugate closure") {
    const auto p1 = design::desired_poly(PoleSpec::real_poles({-5.0, -10.0, -20.0}));
    const double want[4] = {1.0, 35.0, 350.0, 1000.0};
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(p1.coeffs()[i] == doctest::Approx(want[i]).epsilon(1e-12));

    const auto p2 = design::desired_poly(PoleSpec::real_poles({0.0}));
    CHECK(p2.coeffs()[0] == 1.0);
    CHECK(p2.coeffs()[1] == 0.0);

    PoleSpec pair;
    pair.poles = {{-1.0, 1.0}, {-1.0, -1.0}};
    const auto p3 = design::desired_poly(pair);
    CHECK(p3.coeffs()[0] == doctest::Approx(1.0));
    CHECK(p3.coeffs()[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p3.coeffs()[2] == doctest::Approx(2.0).epsilon(1e-12));

    PoleSpec broken;
    broken.poles = {{-1.0, 1.0}, {-2.0, 0.0}};
    CHECK_THROWS_AS(design::desired_poly(broken), mbss::ComplexCoefficients);
}

TEST_CASE("place_poles: the worked design chain") {
    const auto ss = rounded_model();
    const auto spec = PoleSpec::real_poles({-5.0, -10.0, -20.0});
    const auto k = design::place_poles(ss, spec);

    // Hand-derived: K_c = [-1355.548, -646.29, -33.8], T_c inverse applied.
    CHECK(k(0, 0) == doctest::Approx(4268.0743243).epsilon(1e-6));
    CHECK(k(0, 1) == doctest::Approx(242.6013514).epsilon(1e-6));
    CHECK(k(0, 2) == doctest::Approx(-281.6666667).epsilon(1e-6));

    check_eigs(ss.A + ss.B * k, {-5.0, -10.0, -20.0}, 1e-3);
    CHECK(lti::is_stable(ss.A + ss.B * k));
}

TEST_CASE("place_poles: keeping the current poles needs no gain") {
    // Companion form of (s+1)(s+2)(s+3); poles requested where they already sit.
    const auto phi = design::desired_poly(PoleSpec::real_poles({-1.0, -2.0, -3.0}));
    const auto [a_c, b_c] = design::canonical_form(phi);
    const auto k = design::place_poles(a_c, b_c, PoleSpec::real_poles({-1.0, -2.0, -3.0}));
    CHECK(k.max_abs() < 1e-6);
}

TEST_CASE("place_poles: uncontrollable pair is rejected") {
    const Matrix a = Matrix::diagonal({1.0, 1.0});
    const Matrix b{{1.0}, {0.0}};
    CHECK_THROWS_AS(design::place_poles(a, b, PoleSpec::real_poles({-1.0, -2.0})),
                    mbss::NotControllable);
}

TEST_CASE("property: randomized placement hits the spec") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> pole(-30.0, -1.0);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    std::uniform_real_distribution<double> imag(1.0, 10.0);
    for (int rep = 0; rep < 30; ++rep) {
        // Controllable by construction: companion of a random monic cubic,
        // mixed through a well-conditioned similarity.
        std::vector<double> coeffs{1.0, entry(rng) * 5, entry(rng) * 5, entry(rng) * 5};
        const auto [a_c, b_c] = design::canonical_form(numkit::Polynomial{std::move(coeffs)});
        Matrix t(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) t(i, j) = 0.4 * entry(rng);
            t(i, i) += 2.0;
        }
        const Matrix a = t * a_c * numkit::invert(t);
        const Matrix b = t * b_c;

        PoleSpec spec;
        if (rep % 2 == 0) {
            spec = PoleSpec::real_poles({pole(rng), pole(rng), pole(rng)});
        } else {
            const double re = pole(rng), im = imag(rng);
            spec.poles = {{re, im}, {re, -im}, {pole(rng), 0.0}};
        }
        const auto k = design::place_poles(a, b, spec);

        // Multiset match by nearest pairing (sorting alone can swap the
        // members of a conjugate pair when roundoff perturbs the real parts).
        const auto achieved = numkit::eigenvalues(a + b * k);
        std::array<bool, 3> used{};
        for (const auto& w : spec.poles) {
            double best = 1e30;
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < 3; ++j) {
                if (used[j]) continue;
                const double d =
                    std::hypot(achieved[j].re - w.re, achieved[j].im - w.im);
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
            used[best_j] = true;
            CHECK(best < 1e-4);
        }
    }
}

TEST_CASE("property: placement is permutation invariant") {
    const auto ss = rounded_model();
    const auto k1 = design::place_poles(ss, PoleSpec::real_poles({-5.0, -10.0, -20.0}));
    const auto k2 = design::place_poles(ss, PoleSpec::real_poles({-20.0, -5.0, -10.0}));
    const auto k3 = design::place_poles(ss, PoleSpec::real_poles({-10.0, -20.0, -5.0}));
    CHECK((k1 - k2).max_abs() < 1e-9);
    CHECK((k1 - k3).max_abs() < 1e-9);
}

TEST_CASE("observer_gain: duality identity and closed-loop eigenvalues") {
    const auto ss = rounded_model();
    const auto spec = PoleSpec::real_poles({-15.0, -30.0, -60.0});
    const auto g = design::observer_gain(ss, spec);

    // Definitional identity: transpose of placement on the dual system.
    const auto dual = design::place_poles(ss.A.transpose(), ss.C.transpose(), spec).transpose();
    CHECK((g - dual).max_abs() == 0.0);

    check_eigs(ss.A + g * ss.C, {-15.0, -30.0, -60.0}, 1e-4);

    const auto g2 = design::observer_gain(ss, PoleSpec::real_poles({-5.0, -10.0, -20.0}));
    check_eigs(ss.A + g2 * ss.C, {-5.0, -10.0, -20.0}, 1e-4);
}

TEST_CASE("observer_gain: scalar system and unobservable rejection") {
    const auto ss = scalar_system(0.0, 1.0);
    const auto g = design::observer_gain(ss, PoleSpec::real_poles({-4.0}));
    CHECK(g(0, 0) == doctest::Approx(-4.0).epsilon(1e-12));

    const lti::StateSpace blind(Matrix::diagonal({1.0, 2.0}), Matrix{{1.0}, {1.0}},
                                Matrix{{0.0, 0.0}}, Matrix(1, 1));
    CHECK_THROWS_AS(design::observer_gain(blind, PoleSpec::real_poles({-1.0, -2.0})),
                    mbss::NotObservable);
}

TEST_CASE("solve_lyapunov matches the diagonal closed form") {
    const Matrix m = Matrix::diagonal({-1.0, -2.0, -3.0});
    const Matrix w{{4.0, 1.0, 0.0}, {1.0, 6.0, 2.0}, {0.0, 2.0, 8.0}};
    const auto s = design::solve_lyapunov(m, w);
    // M^T S + S M = -W with diagonal M gives S_ij = W_ij / |m_i + m_j|.
    const Matrix want{{2.0, 1.0 / 3.0, 0.0}, {1.0 / 3.0, 1.5, 0.4}, {0.0, 0.4, 4.0 / 3.0}};
    CHECK((s - want).max_abs() < 1e-12);
}

TEST_CASE("solve_care: scalar closed form") {
    const auto ss = scalar_system(1.0, 1.0);
    const auto sol = design::solve_care(ss, Matrix{{1.0}}, 1.0);
    const double want = 1.0 + std::sqrt(2.0);
    CHECK(std::abs(sol.S(0, 0) - want) < 1e-9);
    CHECK(std::abs(sol.K_lqr(0, 0) - want) < 1e-9);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.iterations <= 25);
    CHECK(design::lqr_gain(sol, ss, 1.0)(0, 0) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("solve_care: zero cost on a stable plant costs nothing") {
    const lti::StateSpace ss(Matrix::diagonal({-1.0, -2.0}), Matrix{{1.0}, {1.0}},
                             Matrix{{1.0, 0.0}}, Matrix(1, 1));
    const auto sol = design::solve_care(ss, Matrix(2, 2), 1.0);
    CHECK(sol.S.max_abs() < 1e-12);
    CHECK(sol.K_lqr.max_abs() < 1e-12);

    // Same result when B cannot move anything at all.
    const lti::StateSpace frozen(Matrix::diagonal({-1.0, -2.0}), Matrix(2, 1),
                                 Matrix{{1.0, 0.0}}, Matrix(1, 1));
    const auto sol2 = design::solve_care(frozen, Matrix(2, 2), 1.0);
    CHECK(sol2.S.max_abs() < 1e-12);
}

TEST_CASE("solve_care: double integrator closed form") {
    // A = [[0,1],[0,0]], B = [0,1]^T, Q = I, R = 1 has S = [[sqrt3,1],[1,sqrt3]].
    const lti::StateSpace ss(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}},
                             Matrix{{1.0, 0.0}}, Matrix(1, 1));
    const auto sol = design::solve_care(ss, Matrix::identity(2), 1.0);
    const double s3 = std::sqrt(3.0);
    CHECK(sol.S(0, 0) == doctest::Approx(s3).epsilon(1e-9));
    CHECK(sol.S(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.S(1, 1) == doctest::Approx(s3).epsilon(1e-9));
    CHECK(sol.K_lqr(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.K_lqr(0, 1) == doctest::Approx(s3).epsilon(1e-9));
}

TEST_CASE("solve_care: stock system with the table weights") {
    const auto ss = rounded_model();
    const auto sol = design::solve_care(ss, Matrix::diagonal({9.0, 0.0, 0.0}), 1.0);

    CHECK(sol.iterations <= 25);
    CHECK(sol.residual < 1e-8);
    CHECK((sol.S - sol.S.transpose()).max_abs() < 1e-9);
    for (const auto& ev : numkit::eigenvalues(sol.S)) CHECK(ev.re >= -1e-9);
    CHECK(lti::is_stable(ss.A - ss.B * sol.K_lqr));

    const auto k2 = design::lqr_gain(sol, ss, 1.0);
    CHECK((k2 - sol.K_lqr).max_abs() < 1e-12);
}

TEST_CASE("property: CARE certificates on randomized diagonal weights") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> qw(0.0, 10.0), rw(0.5, 2.5);
    const auto ss = rounded_model();
    for (int rep = 0; rep < 10; ++rep) {
        Matrix q(3, 3);
        q(0, 0) = qw(rng) + 0.5; // keep the position observable in the cost
        q(1, 1) = qw(rng);
        q(2, 2) = qw(rng);
        const double r = rw(rng);
        const auto sol = design::solve_care(ss, q, r);
        CHECK(sol.residual < 1e-8);
        CHECK((sol.S - sol.S.transpose()).max_abs() < 1e-9);
        for (const auto& ev : numkit::eigenvalues(sol.S)) CHECK(ev.re >= -1e-9);
        CHECK(lti::is_stable(ss.A - ss.B * sol.K_lqr));
    }
}

TEST_CASE("property: uniform cost scaling leaves the gain unchanged") {
    const auto ss = rounded_model();
    const Matrix q = Matrix::diagonal({9.0, 0.0, 0.0});
    const auto base = design::solve_care(ss, q, 1.0);
    for (double c : {0.1, 10.0}) {
        const auto scaled = design::solve_care(ss, q * c, c);
        CHECK((scaled.K_lqr - base.K_lqr).max_abs() <
              1e-6 * std::max(1.0, base.K_lqr.max_abs()));
    }
}

TEST_CASE("property: LQR gain is a local cost minimum on rollouts") {
    // Scalar case.
    {
        const auto ss = scalar_system(1.0, 1.0);
        const Matrix q{{1.0}};
        const auto sol = design::solve_care(ss, q, 1.0);
        const double opt =
            rollout_cost(ss.A, ss.B, sol.K_lqr, q, 1.0, {1.0}, 20.0, 1e-3);
        for (double f : {0.9, 1.1}) {
            const double perturbed =
                rollout_cost(ss.A, ss.B, sol.K_lqr * f, q, 1.0, {1.0}, 20.0, 1e-3);
            CHECK(opt <= perturbed);
        }
    }
    // Double integrator.
    {
        const lti::StateSpace ss(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}},
                                 Matrix{{1.0, 0.0}}, Matrix(1, 1));
        const Matrix q = Matrix::identity(2);
        const auto sol = design::solve_care(ss, q, 1.0);
        const double opt =
            rollout_cost(ss.A, ss.B, sol.K_lqr, q, 1.0, {1.0, -0.5}, 20.0, 1e-3);
        for (double f : {0.9, 1.1}) {
            const double perturbed =
                rollout_cost(ss.A, ss.B, sol.K_lqr * f, q, 1.0, {1.0, -0.5}, 20.0, 1e-3);
            CHECK(opt <= perturbed);
        }
    }
}

TEST_CASE("synthesize: every gain honors its own convention") {
    const auto ss = rounded_model();
    const auto gains = design::synthesize(ss, PoleSpec::real_poles({-5.0, -10.0, -20.0}),
                                          PoleSpec::real_poles({-15.0, -30.0, -60.0}),
                                          Matrix::diagonal({9.0, 0.0, 0.0}), 1.0);
    REQUIRE(gains.state_feedback.has_value());
    REQUIRE(gains.observer.has_value());
    REQUIRE(gains.lqr.has_value());
    check_eigs(ss.A + ss.B * *gains.state_feedback, {-5.0, -10.0, -20.0}, 1e-3);
    check_eigs(ss.A + *gains.observer * ss.C, {-15.0, -30.0, -60.0}, 1e-3);
    CHECK(lti::is_stable(ss.A - ss.B * *gains.lqr));
}

TEST_CASE("solve_care input validation") {
    const auto ss = rounded_model();
    CHECK_THROWS_AS(design::solve_care(ss, Matrix::diagonal({9.0, 0.0, 0.0}), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(design::solve_care(ss, Matrix{{1.0, 2.0}, {0.0, 1.0}}, 1.0),
                    std::invalid_argument);
    // Unstable and uncontrollable: no stabilizing seed exists.
    const lti::StateSpace stuck(Matrix::diagonal({1.0, 1.0}), Matrix{{1.0}, {0.0}},
                                Matrix{{1.0, 0.0}}, Matrix(1, 1));
    CHECK_THROWS_AS(design::solve_care(stuck, Matrix::identity(2), 1.0),
                    mbss::NoStabilizingSeed);
}
