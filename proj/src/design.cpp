#include "mbss/design.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "mbss/errors.hpp"

namespace mbss::design {

PoleSpec PoleSpec::real_poles(std::initializer_list<double> p) {
    return real_poles(std::vector<double>(p));
}

PoleSpec PoleSpec::real_poles(const std::vector<double>& p) {
    PoleSpec spec;
    spec.poles.reserve(p.size());
    for (double v : p) spec.poles.push_back(numkit::ComplexRoot{v, 0.0});
    return spec;
}

bool PoleSpec::conjugate_closed(double tol) const {
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (used[i] || std::abs(poles[i].im) <= tol) continue;
        bool matched = false;
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(poles[j].re - poles[i].re) <= tol &&
                std::abs(poles[j].im + poles[i].im) <= tol) {
                used[i] = used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

bool PoleSpec::strictly_stable() const {
    for (const auto& p : poles)
        if (p.re >= 0.0) return false;
    return true;
}

std::pair<numkit::Matrix, numkit::Matrix> canonical_form(const numkit::Polynomial& p) {
    const std::size_t n = p.degree();
    if (n < 1)
        throw std::invalid_argument("canonical_form: degree must be >= 1");
    const double lead = p.coeffs()[0];
    if (std::abs(lead - 1.0) > 1e-9)
        throw std::invalid_argument("canonical_form: polynomial must be monic");

    numkit::Matrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    // Last row holds the negated ascending coefficients a_0 .. a_{n-1}.
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = -p.coeffs()[n - j];

    numkit::Matrix b(n, 1);
    b(n - 1, 0) = 1.0;
    return {a, b};
}

numkit::Polynomial desired_poly(const PoleSpec& spec) {
    if (spec.poles.empty())
        throw std::invalid_argument("desired_poly: empty pole set");
    if (!spec.conjugate_closed())
        throw ComplexCoefficients("desired_poly: pole set not closed under conjugation");

    // Sort first so the expansion is independent of input order.
    std::vector<std::complex<double>> roots;
    roots.reserve(spec.poles.size());
    for (const auto& p : spec.poles) roots.emplace_back(p.re, p.im);
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k >= 1; --k) c[k] -= r * c[k - 1];
    }

    std::vector<double> out;
    out.reserve(c.size());
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    for (const auto& v : c) {
        if (std::abs(v.imag()) > 1e-8 * std::max(1.0, scale))
            throw ComplexCoefficients("desired_poly: expansion left a complex coefficient");
        out.push_back(v.real());
    }
    return numkit::Polynomial(std::move(out));
}

numkit::Matrix place_poles(const numkit::Matrix& a, const numkit::Matrix& b,
                           const PoleSpec& spec) {
    if (!a.square() || b.rows() != a.rows() || b.cols() != 1)
        throw std::invalid_argument("place_poles: expects square A and nx1 B");
    const std::size_t n = a.rows();
    if (spec.size() != n)
        throw std::invalid_argument("place_poles: pole count must equal the system order");

    const numkit::Matrix ctrb = lti::controllability_matrix(a, b);
    if (numkit::rank(ctrb) != n)
        throw NotControllable("place_poles: controllability matrix is rank deficient");

    const numkit::Polynomial phi = numkit::char_poly(a);
    const auto [a_c, b_c] = canonical_form(phi);
    const numkit::Polynomial phi_bar = desired_poly(spec);

    const numkit::Matrix t_c =
        ctrb * numkit::invert(lti::controllability_matrix(a_c, b_c));

    numkit::Matrix k_c(1, n);
    for (std::size_t i = 0; i < n; ++i)
        k_c(0, i) = phi.coeffs()[n - i] - phi_bar.coeffs()[n - i];

    return k_c * numkit::invert(t_c);
}

numkit::Matrix place_poles(const lti::StateSpace& ss, const PoleSpec& spec) {
    if (ss.inputs() != 1)
        throw std::invalid_argument("place_poles: single-input systems only");
    return place_poles(ss.A, ss.B, spec);
}

numkit::Matrix observer_gain(const lti::StateSpace& ss, const PoleSpec& spec) {
    if (ss.outputs() != 1)
        throw std::invalid_argument("observer_gain: single-output systems only");
    const std::size_t n = ss.order();
    const numkit::Matrix obsv = lti::observability_matrix(ss);
    if (numkit::rank(obsv) != n)
        throw NotObservable("observer_gain: observability matrix is rank deficient");
    return place_poles(ss.A.transpose(), ss.C.transpose(), spec).transpose();
}

numkit::Matrix solve_lyapunov(const numkit::Matrix& m, const numkit::Matrix& w) {
    if (!m.square() || !w.square() || m.rows() != w.rows())
        throw std::invalid_argument("solve_lyapunov: shape mismatch");
    const std::size_t n = m.rows();

    // vec(M^T S + S M) = (I (x) M^T + M^T (x) I) vec(S), column-major vec.
    numkit::Matrix sys(n * n, n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = j * n + i;
            for (std::size_t k = 0; k < n; ++k) {
                sys(row, j * n + k) += m(k, i); // (I (x) M^T)
                sys(row, k * n + i) += m(k, j); // (M^T (x) I)
            }
        }

    numkit::Matrix rhs(n * n, 1);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            rhs(j * n + i, 0) = -w(i, j);

    const numkit::Matrix vec_s = numkit::solve_dense(sys, rhs);
    numkit::Matrix s(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            s(i, j) = vec_s(j * n + i, 0);
    return s;
}

namespace {

// Seed poles for the stabilizing initial gain; n = 3 uses {-5, -10, -20}.
PoleSpec seed_poles(std::size_t n) {
    std::vector<double> p;
    double v = -5.0;
    for (std::size_t i = 0; i < n; ++i) {
        p.push_back(v);
        v *= 2.0;
    }
    return PoleSpec::real_poles(p);
}

} // namespace

CareSolution solve_care(const lti::StateSpace& ss, const numkit::Matrix& q, double r_weight) {
    const std::size_t n = ss.order();
    if (ss.inputs() != 1)
        throw std::invalid_argument("solve_care: single-input systems only");
    if (!q.square() || q.rows() != n)
        throw std::invalid_argument("solve_care: Q must be n x n");
    if ((q - q.transpose()).max_abs() > 1e-9)
        throw std::invalid_argument("solve_care: Q must be symmetric");
    if (!(r_weight > 0.0))
        throw std::invalid_argument("solve_care: R must be > 0");

    const numkit::Matrix& a = ss.A;
    const numkit::Matrix& b = ss.B;

    // Stabilizing seed, convention u = -K x (closed loop A - B K).
    numkit::Matrix k(1, n);
    if (!lti::is_stable(a)) {
        try {
            k = -place_poles(a, b, seed_poles(n));
        } catch (const NotControllable&) {
            throw NoStabilizingSeed("solve_care: unstable A with rank-deficient controllability");
        }
    }

    numkit::Matrix s(n, n);
    int iterations = 0;
    bool converged = false;
    for (int j = 0; j < 100; ++j) {
        const numkit::Matrix m = a - b * k;
        const numkit::Matrix w = q + k.transpose() * k * r_weight;
        numkit::Matrix s_next = solve_lyapunov(m, w);
        // Symmetrize to shed elimination roundoff.
        s_next = (s_next + s_next.transpose()) * 0.5;
        k = (b.transpose() * s_next) * (1.0 / r_weight);
        ++iterations;
        // Stop tolerance 1e-10, floored at the fixed-point noise level of the
        // Lyapunov solve (a few hundred ulps of ||S||); below that the
        // iterates cycle without ever meeting an absolute 1e-10.
        const double stop_tol =
            std::max(1e-10, 1024.0 * std::numeric_limits<double>::epsilon() * s_next.max_abs());
        if (j > 0 && (s_next - s).max_abs() < stop_tol) {
            s = s_next;
            converged = true;
            break;
        }
        s = s_next;
    }
    if (!converged)
        throw NoConvergence("solve_care: Kleinman iteration did not settle in 100 steps");

    const numkit::Matrix residual_mat =
        s * a + a.transpose() * s + q - s * b * b.transpose() * s * (1.0 / r_weight);
    return CareSolution{s, k, iterations, residual_mat.max_abs()};
}

numkit::Matrix lqr_gain(const CareSolution& sol, const lti::StateSpace& ss, double r_weight) {
    if (!(r_weight > 0.0))
        throw std::invalid_argument("lqr_gain: R must be > 0");
    return (ss.B.transpose() * sol.S) * (1.0 / r_weight);
}

GainSet synthesize(const lti::StateSpace& ss, const PoleSpec& controller,
                   const PoleSpec& observer, const numkit::Matrix& q, double r_weight) {
    GainSet gains;
    gains.state_feedback = place_poles(ss, controller);
    gains.observer = observer_gain(ss, observer);
    gains.lqr = solve_care(ss, q, r_weight).K_lqr;
    return gains;
}

} // namespace mbss::design
