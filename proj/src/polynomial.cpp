#include "mbss/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mbss/errors.hpp"

namespace mbss::numkit {

namespace {

void validate_coeffs(std::vector<double>& c) {
    if (c.empty())
        throw std::invalid_argument("Polynomial: needs at least one coefficient");
    for (double v : c)
        if (!std::isfinite(v))
            throw std::invalid_argument("Polynomial: non-finite coefficient");
    // Strip exact leading zeros so the invariant (leading != 0 unless the
    // zero polynomial) holds by construction.
    std::size_t first = 0;
    while (first + 1 < c.size() && c[first] == 0.0) ++first;
    if (first > 0) c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(first));
}

} // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    validate_coeffs(coeffs_);
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
    validate_coeffs(coeffs_);
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (double c : coeffs_) acc = acc * s + c;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (double c : coeffs_) acc = acc * s + c;
    return acc;
}

double Polynomial::coeff_norm_inf() const {
    double best = 0.0;
    for (double c : coeffs_) best = std::max(best, std::abs(c));
    return best;
}

Polynomial char_poly(const Matrix& m) {
    if (!m.square())
        throw std::invalid_argument("char_poly: matrix must be square");
    const std::size_t n = m.rows();
    if (n > 8)
        throw std::invalid_argument("char_poly: n <= 8 only");

    // Faddeev-LeVerrier: N_1 = I, c_k = -tr(m N_k)/k, N_{k+1} = m N_k + c_k I.
    std::vector<double> coeffs(n + 1, 0.0);
    coeffs[0] = 1.0;
    Matrix nk = Matrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const Matrix mn = m * nk;
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += mn(i, i);
        const double ck = -trace / static_cast<double>(k);
        coeffs[k] = ck;
        if (k < n) {
            nk = mn;
            for (std::size_t i = 0; i < n; ++i) nk(i, i) += ck;
        }
    }
    return Polynomial(std::move(coeffs));
}

std::vector<ComplexRoot> poly_roots(const Polynomial& p) {
    if (p.degree() < 1 || p.is_zero())
        throw std::invalid_argument("poly_roots: degree must be >= 1");

    const std::size_t n = p.degree();
    const double scale = p.coeff_norm_inf();

    // Work on the monic normalization.
    std::vector<double> monic(p.coeffs());
    const double lead = monic[0];
    for (double& c : monic) c /= lead;

    // Precondition with the Fujiwara root-radius bound so the unit-circle
    // starting points bracket the roots even for widely scaled spectra:
    // iterate on q(z) = p(sigma z)/sigma^n, map the roots back afterwards.
    double radius = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        radius = std::max(radius, std::pow(std::abs(monic[k]), 1.0 / static_cast<double>(k)));
    const double sigma = std::max(1.0, 2.0 * radius);
    std::vector<double> scaled(monic);
    double power = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        power *= sigma;
        scaled[k] /= power;
    }
    const Polynomial pm{std::move(scaled)};

    // Durand-Kerner from powers of 0.4 + 0.9i.
    const std::complex<double> seed{0.4, 0.9};
    std::vector<std::complex<double>> z(n);
    std::complex<double> w{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = w;
        w *= seed;
    }

    constexpr int kMaxSweeps = 500;
    bool small_steps = false;
    for (int sweep = 0; sweep < kMaxSweeps && !small_steps; ++sweep) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == std::complex<double>(0.0, 0.0)) {
                // Collided iterates; nudge apart and keep sweeping.
                z[i] += std::complex<double>(1e-8, 1e-8);
                max_step = 1.0;
                continue;
            }
            const std::complex<double> step = pm(z[i]) / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        small_steps = max_step < 1e-14;
    }

    // Map back to the original variable; the residual criterion is checked
    // on the original coefficients. The tolerance carries the running
    // evaluation-error bound eps * sum |c_k| |r|^(n-k): at large |r| the
    // polynomial cannot be evaluated more accurately than that in doubles,
    // so a root pinned at the evaluation floor counts as converged.
    for (auto& zi : z) zi *= sigma;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < n; ++i) {
        double abs_eval = 0.0;
        const double r = std::abs(z[i]);
        for (double c : p.coeffs()) abs_eval = abs_eval * r + std::abs(c);
        const double residual_tol = 1e-8 * scale + 4.0 * static_cast<double>(n) * eps * abs_eval;
        if (std::abs(p(z[i])) >= residual_tol)
            throw NoConvergence("poly_roots: residual criterion unmet after 500 sweeps");
    }

    std::vector<ComplexRoot> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        double im = std::abs(z[i].imag()) < 1e-8 ? 0.0 : z[i].imag();
        roots[i] = ComplexRoot{z[i].real(), im};
    }
    std::sort(roots.begin(), roots.end(), [](const ComplexRoot& a, const ComplexRoot& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    });
    return roots;
}

std::vector<ComplexRoot> eigenvalues(const Matrix& m) {
    return poly_roots(char_poly(m));
}

} // namespace mbss::numkit
