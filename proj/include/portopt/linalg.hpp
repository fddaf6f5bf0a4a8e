#pragma once

#include <cstddef>
#include <vector>

namespace portopt {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Small (n <= a few hundred), no views.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    double* row(std::size_t i) { return data_.data() + i * cols_; }
    std::size_t size() const { return data_.size(); }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix identity(std::size_t n);

Vector matvec(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);

/// x^T A x for square A.
double quad_form(const Matrix& a, const Vector& x);

double max_abs_asymmetry(const Matrix& a);

/// (A + A^T)/2, exact for already-symmetric input.
Matrix symmetrize(const Matrix& a);

struct EigenDecomposition {
    Vector values;   // unordered
    Matrix vectors;  // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Deterministic; accurate to ~n*eps*||A|| for the sizes used here.
EigenDecomposition jacobi_eigen_sym(Matrix a);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration
/// with a fixed deterministic start vector.
double power_iteration_lmax(const Matrix& a, int max_iter = 50, double tol = 1e-10);

}  // namespace portopt
