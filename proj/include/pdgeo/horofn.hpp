#pragma once

// Flats, horospherical projection and Busemann functions on PD(n).
//
// A flat is identified by a rotation Q: the matrices Q diag(·) Qᵀ. A
// horofunction is the Busemann function of the unit-speed ray
// t ↦ Q e^{±t diag(a)} Qᵀ from I, with a strictly decreasing and ‖a‖ = 1.
// For that ordering the horospherical group is the upper unitriangular
// group, so p = Q ν f νᵀ Qᵀ with f diagonal and b(p) = -⟨a, log f⟩.

#include <span>

#include "pdgeo/symcore.hpp"

namespace pdgeo {

inline constexpr double kDirectionGap = 1e-9;

/// n-flat through I, identified by a proper rotation.
class Flat {
public:
    /// Validates QᵀQ = I and det Q = +1 within 1e-10.
    explicit Flat(Matrix rotation);
    static Flat identity(std::size_t n) { return Flat(Matrix::identity(n)); }

    std::size_t dim() const { return rotation_.dim(); }
    const Matrix& rotation() const { return rotation_; }

private:
    Matrix rotation_;
};

enum class Orientation { Plus, Minus };

inline Orientation reversed(Orientation o)
{
    return o == Orientation::Plus ? Orientation::Minus : Orientation::Plus;
}

class Horofunction {
public:
    /// `direction` must be unit (within 1e-9, then renormalized) with
    /// strictly decreasing entries (gaps > kDirectionGap).
    Horofunction(Flat flat, Vector direction, Orientation orientation = Orientation::Plus);

    /// From a tangent at I (normalized to unit length); DomainError if two
    /// eigenvalues are closer than kDirectionGap.
    static Horofunction from_tangent(const SymMatrix& tangent_at_identity,
                                     Orientation orientation = Orientation::Plus);

    const Flat& flat() const { return flat_; }
    const Vector& direction() const { return direction_; }
    Orientation orientation() const { return orientation_; }
    std::size_t dim() const { return flat_.dim(); }

    /// Same ray, opposite end.
    Horofunction opposite() const { return Horofunction(flat_, direction_, reversed(orientation_), Trusted{}); }

    /// Plus-oriented equivalent: for Minus the ray e^{-tA} is rewritten with
    /// flat Q·P and direction reverse(-a), P the order-reversing permutation
    /// with one column negated when needed to keep det P = +1.
    const Matrix& canonical_rotation() const { return canonical_rotation_; }
    const Vector& canonical_direction() const { return canonical_direction_; }

    /// Q diag(±a) Qᵀ: the unit tangent at I of the defining ray.
    SymMatrix tangent() const;

private:
    struct Trusted {};
    Horofunction(Flat flat, Vector direction, Orientation orientation, Trusted);
    void canonicalize();

    Flat flat_;
    Vector direction_;
    Orientation orientation_;
    Matrix canonical_rotation_;
    Vector canonical_direction_;
};

/// p = ν f νᵀ (in the flat's frame), ν upper unitriangular, f positive diagonal.
struct HoroDecomposition {
    Matrix unipotent;
    Vector flat_part;
};

/// Rotates p into the flat's frame (Qᵀ p Q) and peels off the trailing 1×1
/// block recursively via Schur complements.
HoroDecomposition horo_project(const SpdPoint& p, const Flat& flat);

/// Entrywise log of horo_project(p, rotation).flat_part.
Vector flat_log_coordinates(const SpdPoint& p, const Matrix& rotation);

double busemann(const Horofunction& h, const SpdPoint& p);

/// b_{c'}(p) for the ray rotated by Q' (flat Q'·Q), evaluated as b_c(Q'ᵀ p Q').
double busemann_rotated(const Horofunction& h, const Matrix& rotation, const SpdPoint& p);

/// h with its flat rotated by Q' (flat rotation Q'·Q).
Horofunction rotate_horofunction(const Horofunction& h, const Matrix& rotation);

/// Busemann function of a unit-speed geodesic with arbitrary base q,
/// normalized so b(q) = 0. Evaluated by translating q to I.
double busemann_along(const Geodesic& c, const SpdPoint& p, Orientation orientation = Orientation::Plus);

/// Unit tangent V at p of the ray from p towards the horofunction's point at
/// infinity; b decreases with unit rate along it, so grad b(p) = -V.
SymMatrix descent_direction(const Horofunction& h, const SpdPoint& p);

/// The point at distance s ≥ 0 along the descent ray from p: b drops by s.
SpdPoint horo_flow(const Horofunction& h, const SpdPoint& p, double s);

struct Horoball {
    Horofunction horofunction;
    double level;

    bool contains(const SpdPoint& p, double slack = 1e-12) const
    {
        return busemann(horofunction, p) <= level + slack;
    }
};

/// |max b_+ + max b_-| over X for the ray of h (h's own orientation is ignored).
double horoextent(const Horofunction& h, std::span<const SpdPoint> points);
/// Horoextent along a geodesic; a base other than I is translated to I first.
double horoextent(const Geodesic& c, std::span<const SpdPoint> points);

}  // namespace pdgeo
