#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mbss/matrix.hpp"

namespace mbss::numkit {

// Real polynomial, coefficients in descending degree order.
// Leading coefficient is nonzero unless the polynomial is identically zero.
class Polynomial {
public:
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    const std::vector<double>& coeffs() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    double operator()(double s) const;
    std::complex<double> operator()(std::complex<double> s) const;

    // Largest absolute coefficient.
    double coeff_norm_inf() const;

private:
    std::vector<double> coeffs_;
};

// One root of a real polynomial. Conjugate roots come in pairs;
// roots with |im| below the snap tolerance are returned purely real.
struct ComplexRoot {
    double re = 0.0;
    double im = 0.0;
};

inline std::complex<double> to_complex(const ComplexRoot& r) { return {r.re, r.im}; }

// Monic characteristic polynomial det(sI - m) by the Faddeev-LeVerrier
// recursion. Requires m square with n <= 8.
Polynomial char_poly(const Matrix& m);

// All complex roots by Durand-Kerner iteration (at most 500 sweeps,
// initial guesses at powers of 0.4 + 0.9i). Each returned root r satisfies
// |p(r)| < 1e-8 * max|coeff|, or NoConvergence is thrown. Roots with
// |im| < 1e-8 are snapped to the real axis; output is sorted by (re, im).
std::vector<ComplexRoot> poly_roots(const Polynomial& p);

// Roots of char_poly(m), sorted by (re, im).
std::vector<ComplexRoot> eigenvalues(const Matrix& m);

} // namespace mbss::numkit
