#include "pdgeo/symcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pdgeo/error.hpp"

namespace pdgeo {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_same_dim(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
    }
}

// Reorders eigenpairs descending and makes the rotation proper.
SymEig finish_eig(Matrix v, Vector values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    SymEig out{Matrix(n), Vector(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = values[order[k]];
        for (std::size_t i = 0; i < n; ++i) {
            out.rotation(i, k) = v(i, order[k]);
        }
    }
    if (determinant(out.rotation) < 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            out.rotation(i, n - 1) = -out.rotation(i, n - 1);
        }
    }
    return out;
}

// Qᵀ S Q with rows/columns scaled by d: D Qᵀ S Q D.
SymMatrix scaled_frame(const SymEig& e, const SymMatrix& s, std::span<const double> d)
{
    SymMatrix m = congruence_t(e.rotation, s);
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            m(i, j) *= d[i] * d[j];
        }
    }
    return m;
}

Vector map_values(std::span<const double> v, double (*f)(double))
{
    Vector out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), f);
    return out;
}

}  // namespace

SymEig sym_eig(const SymMatrix& s)
{
    const std::size_t n = s.dim();
    if (!s.all_finite()) {
        throw DomainError("sym_eig: non-finite entry");
    }
    Matrix a = s.dense();
    Matrix v = Matrix::identity(n);

    int sweep = 0;
    for (;; ++sweep) {
        if (sweep >= kMaxSweeps) {
            throw NumericError("sym_eig: Jacobi did not converge after " + std::to_string(sweep) + " sweeps");
        }
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double app = a(p, p);
                const double aqq = a(q, q);
                if (std::abs(apq) <= kEps * std::sqrt(std::abs(app * aqq))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = a(p, r) = c * arp - sn * arq;
                        a(r, q) = a(q, r) = sn * arp + c * arq;
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - sn * vrq;
                    v(r, q) = sn * vrp + c * vrq;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }
    Vector values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = a(i, i);
    }
    return finish_eig(std::move(v), std::move(values));
}

SymMatrix spectral_apply(const SymEig& e, const std::function<double(double)>& f)
{
    Vector fv(e.values.size());
    std::transform(e.values.begin(), e.values.end(), fv.begin(), f);
    return congruence(e.rotation, SymMatrix::diagonal(fv));
}

SpdPoint::SpdPoint(const SymMatrix& m) : m_(m), eig_()
{
    const std::size_t n = m.dim();
    if (n == 0) {
        throw DomainError("SpdPoint: empty matrix");
    }
    if (!m.all_finite()) {
        throw DomainError("SpdPoint: non-finite entry");
    }
    eig_ = sym_eig(m);
    const double hi = eig_.values.front();
    const double lo = eig_.values.back();
    if (!(hi > 0.0) || !(lo > static_cast<double>(n) * kEps * hi)) {
        throw DomainError("SpdPoint: matrix is not positive definite (min eigenvalue " + std::to_string(lo) +
                          ", max eigenvalue " + std::to_string(hi) + ")");
    }
}

SpdPoint SpdPoint::from_spectral(const Matrix& rotation, std::span<const double> eigenvalues)
{
    const std::size_t n = eigenvalues.size();
    check_same_dim(rotation.dim(), n, "SpdPoint::from_spectral");
    for (double l : eigenvalues) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw DomainError("SpdPoint::from_spectral: eigenvalue not positive and finite");
        }
    }
    SymEig e = finish_eig(rotation, Vector(eigenvalues.begin(), eigenvalues.end()));
    SymMatrix m = congruence(e.rotation, SymMatrix::diagonal(e.values));
    return SpdPoint(std::move(m), std::move(e));
}

SpdPoint SpdPoint::identity(std::size_t n)
{
    return SpdPoint(SymMatrix::identity(n), SymEig{Matrix::identity(n), Vector(n, 1.0)});
}

double SpdPoint::log_det() const
{
    double s = 0.0;
    for (double l : eig_.values) {
        s += std::log(l);
    }
    return s;
}

SymMatrix SpdPoint::sqrt() const
{
    return spectral_apply(eig_, [](double l) { return std::sqrt(l); });
}

SymMatrix SpdPoint::inv_sqrt() const
{
    return spectral_apply(eig_, [](double l) { return 1.0 / std::sqrt(l); });
}

SymMatrix SpdPoint::power(double t) const
{
    return spectral_apply(eig_, [t](double l) { return std::pow(l, t); });
}

SymMatrix spd_log(const SpdPoint& p)
{
    return spectral_apply(p.eig(), [](double l) { return std::log(l); });
}

SpdPoint spd_exp(const SymMatrix& s)
{
    const SymEig e = sym_eig(s);
    if (e.values.front() > 700.0 || e.values.back() < -700.0) {
        throw NumericError("spd_exp: eigenvalue magnitude overflows the exponential");
    }
    return SpdPoint::from_spectral(e.rotation, map_values(e.values, [](double x) { return std::exp(x); }));
}

double metric_dist(const SpdPoint& p, const SpdPoint& q)
{
    check_same_dim(p.dim(), q.dim(), "metric_dist");
    const Vector d = map_values(p.eig().values, [](double l) { return 1.0 / std::sqrt(l); });
    const SymEig w = sym_eig(scaled_frame(p.eig(), q.matrix(), d));
    double sum = 0.0;
    for (double l : w.values) {
        if (!(l > 0.0)) {
            throw NumericError("metric_dist: lost positivity in p^{-1/2} q p^{-1/2}");
        }
        const double ll = std::log(l);
        sum += ll * ll;
    }
    return std::sqrt(sum);
}

double tangent_norm(const SpdPoint& q, const SymMatrix& a)
{
    check_same_dim(q.dim(), a.dim(), "tangent_norm");
    const Vector d = map_values(q.eig().values, [](double l) { return 1.0 / std::sqrt(l); });
    return scaled_frame(q.eig(), a, d).frobenius_norm();
}

SymMatrix log_at(const SpdPoint& p, const SpdPoint& q)
{
    check_same_dim(p.dim(), q.dim(), "log_at");
    const Vector inv = map_values(p.eig().values, [](double l) { return 1.0 / std::sqrt(l); });
    const Vector fwd = map_values(p.eig().values, [](double l) { return std::sqrt(l); });
    const SymMatrix w = scaled_frame(p.eig(), q.matrix(), inv);
    const SymEig we = sym_eig(w);
    SymMatrix l = spectral_apply(we, [](double x) { return std::log(x); });
    const std::size_t n = l.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            l(i, j) *= fwd[i] * fwd[j];
        }
    }
    return congruence(p.eig().rotation, l);
}

SpdPoint exp_at(const SpdPoint& p, const SymMatrix& v)
{
    check_same_dim(p.dim(), v.dim(), "exp_at");
    const Vector inv = map_values(p.eig().values, [](double l) { return 1.0 / std::sqrt(l); });
    const Vector fwd = map_values(p.eig().values, [](double l) { return std::sqrt(l); });
    const SymEig we = sym_eig(scaled_frame(p.eig(), v, inv));
    if (we.values.front() > 700.0 || we.values.back() < -700.0) {
        throw NumericError("exp_at: step overflows the exponential");
    }
    SymMatrix e = spectral_apply(we, [](double x) { return std::exp(x); });
    const std::size_t n = e.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            e(i, j) *= fwd[i] * fwd[j];
        }
    }
    return SpdPoint(congruence(p.eig().rotation, e));
}

SpdPoint geodesic_interpolate(const SpdPoint& p, const SpdPoint& q, double t)
{
    return exp_at(p, t * log_at(p, q));
}

Geodesic::Geodesic(SpdPoint base, const SymMatrix& tangent) : base_(std::move(base)), tangent_(tangent), normalized_()
{
    check_same_dim(base_.dim(), tangent.dim(), "Geodesic");
    const Vector d = map_values(base_.eig().values, [](double l) { return 1.0 / std::sqrt(l); });
    const SymMatrix frame = scaled_frame(base_.eig(), tangent, d);
    const double norm = frame.frobenius_norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("Geodesic: tangent must be nonzero and finite");
    }
    tangent_ = (1.0 / norm) * tangent;
    normalized_ = congruence(base_.eig().rotation, (1.0 / norm) * frame);
}

SpdPoint geodesic_point(const Geodesic& c, double t)
{
    const SymEig e = sym_eig(c.normalized_tangent());
    Vector scaled(e.values.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const double x = t * e.values[i];
        if (std::abs(x) > 700.0) {
            throw NumericError("geodesic_point: |t| too large, exponential overflows");
        }
        scaled[i] = std::exp(x);
    }
    const SpdPoint along = SpdPoint::from_spectral(e.rotation, scaled);
    if (c.base().matrix() == SymMatrix::identity(c.base().dim())) {
        return along;
    }
    return translate_from_identity(c.base(), along);
}

SpdPoint translate_to_identity(const SpdPoint& q, const SpdPoint& p)
{
    check_same_dim(q.dim(), p.dim(), "translate_to_identity");
    const Vector d = map_values(q.eig().values, [](double l) { return 1.0 / std::sqrt(l); });
    return SpdPoint(congruence(q.eig().rotation, scaled_frame(q.eig(), p.matrix(), d)));
}

SpdPoint translate_from_identity(const SpdPoint& q, const SpdPoint& p)
{
    check_same_dim(q.dim(), p.dim(), "translate_from_identity");
    const Vector d = map_values(q.eig().values, [](double l) { return std::sqrt(l); });
    return SpdPoint(congruence(q.eig().rotation, scaled_frame(q.eig(), p.matrix(), d)));
}

SpdPoint act(const Matrix& g, const SpdPoint& p)
{
    check_same_dim(g.dim(), p.dim(), "act");
    return SpdPoint(congruence(g, p.matrix()));
}

double geodesic_anisotropy(const SpdPoint& p)
{
    const auto& v = p.eig().values;
    Vector logs = map_values(v, [](double l) { return std::log(l); });
    const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
    double sum = 0.0;
    for (double l : logs) {
        sum += (l - mean) * (l - mean);
    }
    return std::sqrt(sum);
}

}  // namespace pdgeo
