#include "pdgeo/horofn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdgeo/error.hpp"

namespace pdgeo {

namespace {

void check_direction(const Vector& a)
{
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        if (!(a[i] - a[i + 1] > kDirectionGap)) {
            throw DomainError("horofunction direction must have strictly decreasing entries (gap > 1e-9); "
                              "sort the diagonal and separate tied entries");
        }
    }
}

// ν f νᵀ factorization of an SPD matrix given in the flat's frame.
HoroDecomposition udu(const SymMatrix& s)
{
    const std::size_t n = s.dim();
    Matrix m = s.dense();
    HoroDecomposition out{Matrix::identity(n), Vector(n)};
    for (std::size_t k = n; k-- > 0;) {
        const double pivot = m(k, k);
        if (!(pivot > 0.0)) {
            throw NumericError("horo_project: Schur complement lost positivity");
        }
        out.flat_part[k] = pivot;
        for (std::size_t i = 0; i < k; ++i) {
            out.unipotent(i, k) = m(i, k) / pivot;
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                m(i, j) -= m(i, k) * m(j, k) / pivot;
                m(j, i) = m(i, j);
            }
        }
    }
    return out;
}

}  // namespace

Flat::Flat(Matrix rotation) : rotation_(std::move(rotation))
{
    const std::size_t n = rotation_.dim();
    if (n == 0) {
        throw DomainError("Flat: empty rotation");
    }
    const double orth = max_abs_diff(rotation_.transposed() * rotation_, Matrix::identity(n));
    if (!(orth <= 1e-10)) {
        throw DomainError("Flat: rotation is not orthogonal (deviation " + std::to_string(orth) + ")");
    }
    if (std::abs(determinant(rotation_) - 1.0) > 1e-10) {
        throw DomainError("Flat: rotation must have determinant +1");
    }
}

Horofunction::Horofunction(Flat flat, Vector direction, Orientation orientation)
    : flat_(std::move(flat)), direction_(std::move(direction)), orientation_(orientation)
{
    if (direction_.size() != flat_.dim()) {
        throw DomainError("Horofunction: direction length does not match the flat dimension");
    }
    const double norm = norm2(direction_);
    if (!(std::abs(norm - 1.0) <= 1e-9)) {
        throw DomainError("Horofunction: direction must be a unit vector (norm " + std::to_string(norm) + ")");
    }
    for (auto& v : direction_) {
        v /= norm;
    }
    check_direction(direction_);
    canonicalize();
}

Horofunction::Horofunction(Flat flat, Vector direction, Orientation orientation, Trusted)
    : flat_(std::move(flat)), direction_(std::move(direction)), orientation_(orientation)
{
    canonicalize();
}

void Horofunction::canonicalize()
{
    const std::size_t n = dim();
    if (orientation_ == Orientation::Plus) {
        canonical_rotation_ = flat_.rotation();
        canonical_direction_ = direction_;
        return;
    }
    Matrix perm(n);
    for (std::size_t j = 0; j < n; ++j) {
        perm(n - 1 - j, j) = 1.0;
    }
    if (determinant(perm) < 0.0) {
        perm(n - 1, 0) = -1.0;
    }
    canonical_rotation_ = flat_.rotation() * perm;
    canonical_direction_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        canonical_direction_[j] = -direction_[n - 1 - j];
    }
}

Horofunction Horofunction::from_tangent(const SymMatrix& tangent_at_identity, Orientation orientation)
{
    const double norm = tangent_at_identity.frobenius_norm();
    if (!(norm > 0.0)) {
        throw DomainError("Horofunction::from_tangent: zero tangent");
    }
    SymEig e = sym_eig((1.0 / norm) * tangent_at_identity);
    return Horofunction(Flat(std::move(e.rotation)), std::move(e.values), orientation);
}

SymMatrix Horofunction::tangent() const
{
    Vector signed_dir = direction_;
    if (orientation_ == Orientation::Minus) {
        for (auto& v : signed_dir) {
            v = -v;
        }
    }
    return congruence(flat_.rotation(), SymMatrix::diagonal(signed_dir));
}

HoroDecomposition horo_project(const SpdPoint& p, const Flat& flat)
{
    if (p.dim() != flat.dim()) {
        throw DomainError("horo_project: dimension mismatch");
    }
    return udu(congruence_t(flat.rotation(), p.matrix()));
}

Vector flat_log_coordinates(const SpdPoint& p, const Matrix& rotation)
{
    if (p.dim() != rotation.dim()) {
        throw DomainError("flat_log_coordinates: dimension mismatch");
    }
    Vector y = udu(congruence_t(rotation, p.matrix())).flat_part;
    for (auto& v : y) {
        v = std::log(v);
    }
    return y;
}

double busemann(const Horofunction& h, const SpdPoint& p)
{
    const Vector y = flat_log_coordinates(p, h.canonical_rotation());
    return -dot(h.canonical_direction(), y);
}

double busemann_rotated(const Horofunction& h, const Matrix& rotation, const SpdPoint& p)
{
    return busemann(h, act(rotation.transposed(), p));
}

Horofunction rotate_horofunction(const Horofunction& h, const Matrix& rotation)
{
    return Horofunction(Flat(rotation * h.flat().rotation()), h.direction(), h.orientation());
}

double busemann_along(const Geodesic& c, const SpdPoint& p, Orientation orientation)
{
    const Horofunction h = Horofunction::from_tangent(c.normalized_tangent(), orientation);
    return busemann(h, translate_to_identity(c.base(), p));
}

namespace {

// g = R ν f^{1/2}; the descent ray from p is s ↦ g e^{sA} gᵀ.
Matrix descent_frame(const Horofunction& h, const SpdPoint& p, Vector& f)
{
    const Matrix& r = h.canonical_rotation();
    HoroDecomposition dec = udu(congruence_t(r, p.matrix()));
    f = dec.flat_part;
    return r * dec.unipotent;
}

}  // namespace

SymMatrix descent_direction(const Horofunction& h, const SpdPoint& p)
{
    Vector f;
    const Matrix rn = descent_frame(h, p, f);
    Vector d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        d[i] = f[i] * h.canonical_direction()[i];
    }
    return congruence(rn, SymMatrix::diagonal(d));
}

SpdPoint horo_flow(const Horofunction& h, const SpdPoint& p, double s)
{
    Vector f;
    const Matrix rn = descent_frame(h, p, f);
    Vector d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = s * h.canonical_direction()[i];
        if (std::abs(x) > 700.0) {
            throw NumericError("horo_flow: step overflows the exponential");
        }
        d[i] = f[i] * std::exp(x);
    }
    return SpdPoint(congruence(rn, SymMatrix::diagonal(d)));
}

double horoextent(const Horofunction& h, std::span<const SpdPoint> points)
{
    if (points.empty()) {
        throw DomainError("horoextent: empty point set");
    }
    const Horofunction plus(h.flat(), h.direction(), Orientation::Plus);
    const Horofunction minus = plus.opposite();
    double max_plus = -INFINITY;
    double max_minus = -INFINITY;
    for (const auto& p : points) {
        max_plus = std::max(max_plus, busemann(plus, p));
        max_minus = std::max(max_minus, busemann(minus, p));
    }
    return std::abs(max_plus + max_minus);
}

double horoextent(const Geodesic& c, std::span<const SpdPoint> points)
{
    if (points.empty()) {
        throw DomainError("horoextent: empty point set");
    }
    const Horofunction h = Horofunction::from_tangent(c.normalized_tangent());
    const SymMatrix identity = SymMatrix::identity(c.base().dim());
    if (c.base().matrix() == identity) {
        return horoextent(h, points);
    }
    std::vector<SpdPoint> shifted;
    shifted.reserve(points.size());
    for (const auto& p : points) {
        shifted.push_back(translate_to_identity(c.base(), p));
    }
    return horoextent(h, shifted);
}

}  // namespace pdgeo
