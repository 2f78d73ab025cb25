#include "mbss/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "mbss/errors.hpp"

namespace mbss::numkit {

namespace {
constexpr double kPivotFloor = 1e-12;
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows_ < 1 || cols_ < 1)
        throw std::invalid_argument("Matrix: rows and cols must be >= 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ < 1 || cols_ < 1)
        throw std::invalid_argument("Matrix: rows and cols must be >= 1");
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("Matrix: data length does not match shape");
    check_finite();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    if (rows_ < 1 || cols_ < 1)
        throw std::invalid_argument("Matrix: rows and cols must be >= 1");
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_)
            throw std::invalid_argument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite();
}

void Matrix::check_finite() const {
    for (double v : data_)
        if (!std::isfinite(v))
            throw std::invalid_argument("Matrix: non-finite entry");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> d) {
    Matrix m(d.size(), d.size());
    std::size_t i = 0;
    for (double v : d) m(i, i) = v, ++i;
    m.check_finite();
    return m;
}

Matrix Matrix::column(std::initializer_list<double> v) {
    return column(std::vector<double>(v));
}

Matrix Matrix::column(const std::vector<double>& v) {
    Matrix m(v.size(), 1, v);
    return m;
}

Matrix Matrix::row_vector(std::initializer_list<double> v) {
    return row_vector(std::vector<double>(v));
}

Matrix Matrix::row_vector(const std::vector<double>& v) {
    Matrix m(1, v.size(), v);
    return m;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("Matrix +: shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + rhs.data_[k];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("Matrix -: shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - rhs.data_[k];
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("Matrix *: inner dimension mismatch");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) += a * rhs(k, j);
        }
    return out;
}

Matrix Matrix::operator*(double s) const {
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * s;
    return out;
}

Matrix Matrix::operator-() const { return (*this) * -1.0; }

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

double Matrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

Matrix invert(const Matrix& m) {
    if (!m.square())
        throw std::invalid_argument("invert: matrix must be square");
    const std::size_t n = m.rows();

    // Augmented [m | I], then full Gauss-Jordan sweep.
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1.0;
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(aug(r, col)) > std::abs(aug(pivot, col))) pivot = r;
        if (std::abs(aug(pivot, col)) < kPivotFloor)
            throw SingularMatrix("invert: pivot below 1e-12 at column " + std::to_string(col));
        if (pivot != col)
            for (std::size_t j = 0; j < 2 * n; ++j)
                std::swap(aug(col, j), aug(pivot, j));

        const double scale = aug(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j) aug(col, j) /= scale;

        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = aug(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) aug(r, j) -= f * aug(col, j);
        }
    }

    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = aug(i, n + j);
    return out;
}

namespace {

Matrix lu_solve_once(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();

    Matrix lu = a;
    Matrix rhs = b;

    // Forward elimination with partial pivoting, applied to the rhs in lockstep.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (std::abs(lu(pivot, col)) < kPivotFloor)
            throw SingularMatrix("solve_dense: pivot below 1e-12 at column " + std::to_string(col));
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(rhs(col, j), rhs(pivot, j));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / lu(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < m; ++j) rhs(r, j) -= f * rhs(col, j);
        }
    }

    // Back substitution.
    Matrix x(n, m);
    for (std::size_t jj = 0; jj < m; ++jj) {
        for (std::size_t ii = n; ii-- > 0;) {
            double s = rhs(ii, jj);
            for (std::size_t k = ii + 1; k < n; ++k) s -= lu(ii, k) * x(k, jj);
            x(ii, jj) = s / lu(ii, ii);
        }
    }
    return x;
}

} // namespace

Matrix solve_dense(const Matrix& a, const Matrix& b) {
    if (!a.square())
        throw std::invalid_argument("solve_dense: a must be square");
    if (b.rows() != a.rows())
        throw std::invalid_argument("solve_dense: b row count mismatch");

    Matrix x = lu_solve_once(a, b);
    // One pass of iterative refinement keeps the residual at roundoff level
    // even when entries span several orders of magnitude.
    const Matrix r = b - a * x;
    if (r.max_abs() > 0.0)
        x = x + lu_solve_once(a, r);
    return x;
}

std::size_t rank(const Matrix& m, double tol) {
    if (tol < 0.0)
        throw std::invalid_argument("rank: tol must be >= 0");
    Matrix work = m;
    const std::size_t rows = work.rows();
    const std::size_t cols = work.cols();

    std::size_t r = 0; // current pivot row
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t pivot = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(work(i, col)) > std::abs(work(pivot, col))) pivot = i;
        if (std::abs(work(pivot, col)) <= tol)
            continue; // column has no usable pivot
        if (pivot != r)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(work(r, j), work(pivot, j));
        for (std::size_t i = r + 1; i < rows; ++i) {
            const double f = work(i, col) / work(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < cols; ++j) work(i, j) -= f * work(r, j);
        }
        ++r;
    }
    return r;
}

std::size_t rank(const Matrix& m) {
    const double tol =
        1e-9 * m.norm_inf() * static_cast<double>(std::max(m.rows(), m.cols()));
    return rank(m, tol);
}

} // namespace mbss::numkit
