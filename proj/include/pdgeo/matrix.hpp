#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace pdgeo {

using Vector = std::vector<double>;

/// Dense square matrix, row-major, runtime dimension.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<const double> data() const { return data_; }

    Matrix transposed() const;
    Vector column(std::size_t j) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(double s, const Matrix& a);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix stored once (packed upper triangle), so symmetry is exact.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * (n + 1) / 2, fill) {}

    /// Takes the symmetric part (M + Mᵀ)/2 of a dense matrix.
    static SymMatrix from_dense(const Matrix& m);
    /// Uses the upper triangle only; throws DomainError if the lower one
    /// differs by more than `tol` (relative to the largest entry).
    static SymMatrix from_dense_checked(const Matrix& m, double tol);
    static SymMatrix identity(std::size_t n);
    static SymMatrix diagonal(std::span<const double> d);

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
    std::span<const double> packed() const { return data_; }

    Matrix dense() const;
    double frobenius_norm() const;
    double trace() const;
    bool all_finite() const;

    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
    friend SymMatrix operator*(double s, const SymMatrix& a);
    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    std::size_t index(std::size_t i, std::size_t j) const
    {
        if (i > j) {
            std::swap(i, j);
        }
        return i * n_ - i * (i + 1) / 2 + j;
    }

    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// g S gᵀ, symmetrized.
SymMatrix congruence(const Matrix& g, const SymMatrix& s);
/// gᵀ S g, symmetrized.
SymMatrix congruence_t(const Matrix& g, const SymMatrix& s);

double determinant(const Matrix& m);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// max |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const SymMatrix& a, const SymMatrix& b);

}  // namespace pdgeo
