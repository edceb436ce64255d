#pragma once

// Affine-invariant Riemannian structure of PD(n): spectral calculus,
// exp/log maps, the metric, geodesics and the isometric action of GL(n).

#include <functional>

#include "pdgeo/matrix.hpp"

namespace pdgeo {

/// S = rotation · diag(values) · rotationᵀ with values sorted descending and
/// det(rotation) = +1.
struct SymEig {
    Matrix rotation;
    Vector values;
};

/// Cyclic Jacobi eigensolver. Deterministic sweep order; the stopping rule
/// compares each off-diagonal entry against the geometric mean of the two
/// diagonal entries, which keeps relative accuracy on graded SPD input.
SymEig sym_eig(const SymMatrix& s);

/// rotation · diag(f(values)) · rotationᵀ
SymMatrix spectral_apply(const SymEig& e, const std::function<double(double)>& f);

/// Element of PD(n). The spectral decomposition is computed once at
/// construction (it is also the SPD certificate) and kept alongside the
/// entries, so functions of the point never re-diagonalize it.
class SpdPoint {
public:
    /// Validates: finite, symmetric, min eigenvalue > n·ε·max eigenvalue.
    explicit SpdPoint(const SymMatrix& m);
    /// Builds Q diag(λ) Qᵀ and keeps (Q, λ) as the exact factorization.
    static SpdPoint from_spectral(const Matrix& rotation, std::span<const double> eigenvalues);
    static SpdPoint identity(std::size_t n);

    std::size_t dim() const { return m_.dim(); }
    const SymMatrix& matrix() const { return m_; }
    const SymEig& eig() const { return eig_; }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    double log_det() const;
    SymMatrix sqrt() const;
    SymMatrix inv_sqrt() const;
    SymMatrix power(double t) const;

private:
    SpdPoint(SymMatrix m, SymEig e) : m_(std::move(m)), eig_(std::move(e)) {}

    SymMatrix m_;
    SymEig eig_;
};

/// Principal matrix logarithm.
SymMatrix spd_log(const SpdPoint& p);
/// Matrix exponential of a symmetric matrix.
SpdPoint spd_exp(const SymMatrix& s);

/// ‖log(p^{-1/2} q p^{-1/2})‖_F
double metric_dist(const SpdPoint& p, const SpdPoint& q);

/// ‖A‖_q = ‖q^{-1/2} A q^{-1/2}‖_F
double tangent_norm(const SpdPoint& q, const SymMatrix& a);

/// Riemannian log at p, as an ambient symmetric matrix (tangent at p).
SymMatrix log_at(const SpdPoint& p, const SpdPoint& q);
/// Riemannian exp at p of a tangent V: p^{1/2} e^{p^{-1/2} V p^{-1/2}} p^{1/2}.
SpdPoint exp_at(const SpdPoint& p, const SymMatrix& v);

/// Point at fraction t of the geodesic segment from p (t=0) to q (t=1).
SpdPoint geodesic_interpolate(const SpdPoint& p, const SpdPoint& q, double t);

/// Unit-speed geodesic c(t) = q^{1/2} e^{t q^{-1/2} A q^{-1/2}} q^{1/2}.
class Geodesic {
public:
    /// Normalizes the tangent to ‖A‖_q = 1; a zero tangent is a DomainError.
    Geodesic(SpdPoint base, const SymMatrix& tangent);

    const SpdPoint& base() const { return base_; }
    const SymMatrix& tangent() const { return tangent_; }
    /// q^{-1/2} A q^{-1/2}: the tangent transported to the identity.
    const SymMatrix& normalized_tangent() const { return normalized_; }

private:
    SpdPoint base_;
    SymMatrix tangent_;
    SymMatrix normalized_;
};

SpdPoint geodesic_point(const Geodesic& c, double t);

/// q^{-1/2} p q^{-1/2}: the isometry taking q to I applied to p.
SpdPoint translate_to_identity(const SpdPoint& q, const SpdPoint& p);
/// q^{1/2} p q^{1/2}: inverse of translate_to_identity.
SpdPoint translate_from_identity(const SpdPoint& q, const SpdPoint& p);

/// g p gᵀ for invertible g.
SpdPoint act(const Matrix& g, const SpdPoint& p);

/// d(det(p)^{1/n} I, p)
double geodesic_anisotropy(const SpdPoint& p);

}  // namespace pdgeo
