#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace mbss::numkit {

// Dense real matrix with value semantics, row-major storage.
// Everything here is desk scale (n <= 9); no attempt at large-n performance.
class Matrix {
public:
    // Zero matrix of the given shape.
    Matrix(std::size_t rows, std::size_t cols);

    // Row-major data; length must equal rows*cols and every entry finite.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    // Brace construction: Matrix{{0,1},{2,3}}.
    Matrix(std::initializer_list<std::initializer_list<double>> init);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::initializer_list<double> d);
    static Matrix column(std::initializer_list<double> v);
    static Matrix column(const std::vector<double>& v);
    static Matrix row_vector(std::initializer_list<double> v);
    static Matrix row_vector(const std::vector<double>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator*(double s) const;
    Matrix operator-() const;

    Matrix transpose() const;

    // Induced infinity norm (max absolute row sum).
    double norm_inf() const;

    // Largest absolute entry.
    double max_abs() const;

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;

    void check_finite() const;
};

inline Matrix operator*(double s, const Matrix& m) { return m * s; }

// Inverse via Gauss-Jordan elimination with partial pivoting.
// Throws SingularMatrix when a pivot magnitude drops below 1e-12.
Matrix invert(const Matrix& m);

// Solves a*X = b by LU factorization with partial pivoting.
Matrix solve_dense(const Matrix& a, const Matrix& b);

// Numerical rank by row echelon reduction with partial pivoting;
// pivots with magnitude <= tol count as zero.
std::size_t rank(const Matrix& m, double tol);

// Default tolerance: 1e-9 * ||m||_inf * max(rows, cols).
std::size_t rank(const Matrix& m);

} // namespace mbss::numkit
