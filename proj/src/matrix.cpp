#include "pdgeo/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "pdgeo/error.hpp"

namespace pdgeo {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()), data_()
{
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw DomainError("Matrix: initializer is not square");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d)
{
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

Matrix Matrix::transposed() const
{
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Vector Matrix::column(std::size_t j) const
{
    Vector c(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        c[i] = (*this)(i, j);
    }
    return c;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    const std::size_t n = a.dim();
    if (b.dim() != n) {
        throw DomainError("Matrix product: dimension mismatch");
    }
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b)
{
    Matrix c = a;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            c(i, j) += b(i, j);
        }
    }
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b)
{
    return a + (-1.0) * b;
}

Matrix operator*(double s, const Matrix& a)
{
    Matrix c = a;
    for (auto& v : c.data_) {
        v *= s;
    }
    return c;
}

SymMatrix SymMatrix::from_dense(const Matrix& m)
{
    const std::size_t n = m.dim();
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            s(i, j) = 0.5 * (m(i, j) + m(j, i));
        }
    }
    return s;
}

SymMatrix SymMatrix::from_dense_checked(const Matrix& m, double tol)
{
    const std::size_t n = m.dim();
    double scale = 0.0;
    for (double v : m.data()) {
        scale = std::max(scale, std::abs(v));
    }
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol * std::max(scale, 1.0)) {
                throw DomainError("matrix is not symmetric");
            }
            s(i, j) = m(i, j);
        }
    }
    return s;
}

SymMatrix SymMatrix::identity(std::size_t n)
{
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
    }
    return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d)
{
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        s(i, i) = d[i];
    }
    return s;
}

Matrix SymMatrix::dense() const
{
    Matrix m(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            m(i, j) = (*this)(i, j);
        }
    }
    return m;
}

double SymMatrix::frobenius_norm() const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            sum += v * v;
        }
    }
    return std::sqrt(sum);
}

double SymMatrix::trace() const
{
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

bool SymMatrix::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b)
{
    if (a.dim() != b.dim()) {
        throw DomainError("SymMatrix sum: dimension mismatch");
    }
    SymMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) {
        c.data_[k] += b.data_[k];
    }
    return c;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b)
{
    return a + (-1.0) * b;
}

SymMatrix operator*(double s, const SymMatrix& a)
{
    SymMatrix c = a;
    for (auto& v : c.data_) {
        v *= s;
    }
    return c;
}

SymMatrix congruence(const Matrix& g, const SymMatrix& s)
{
    return SymMatrix::from_dense(g * s.dense() * g.transposed());
}

SymMatrix congruence_t(const Matrix& g, const SymMatrix& s)
{
    return SymMatrix::from_dense(g.transposed() * s.dense() * g);
}

double determinant(const Matrix& m)
{
    const std::size_t n = m.dim();
    Matrix a = m;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) {
                piv = i;
            }
        }
        if (a(piv, k) == 0.0) {
            return 0.0;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
            }
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) {
                a(i, j) -= f * a(k, j);
            }
        }
    }
    return det;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

double max_abs_diff(const Matrix& a, const Matrix& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
        }
    }
    return m;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.packed().size(); ++k) {
        m = std::max(m, std::abs(a.packed()[k] - b.packed()[k]));
    }
    return m;
}

}  // namespace pdgeo
