#include "pdgeo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pdgeo/centerpt.hpp"
#include "pdgeo/error.hpp"

namespace pdgeo::oracles {

namespace {

Vector gaussian_vector(std::size_t n, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (auto& x : v) {
        x = normal(rng);
    }
    return v;
}

Vector unit_vector(std::size_t n, Rng& rng)
{
    while (true) {
        Vector v = gaussian_vector(n, rng);
        const double nrm = norm2(v);
        if (nrm > 1e-8) {
            for (auto& x : v) {
                x /= nrm;
            }
            return v;
        }
    }
}

}  // namespace

Matrix random_rotation(std::size_t n, Rng& rng)
{
    while (true) {
        std::vector<Vector> cols;
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            Vector v = gaussian_vector(n, rng);
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& c : cols) {
                    const double proj = dot(c, v);
                    for (std::size_t i = 0; i < n; ++i) {
                        v[i] -= proj * c[i];
                    }
                }
            }
            const double nrm = norm2(v);
            ok = nrm > 1e-6;
            for (auto& x : v) {
                x /= nrm;
            }
            cols.push_back(std::move(v));
        }
        if (!ok) {
            continue;
        }
        Matrix q(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                q(i, j) = cols[j][i];
            }
        }
        if (determinant(q) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                q(i, 0) = -q(i, 0);
            }
        }
        return q;
    }
}

Vector random_sorted_direction(std::size_t n, Rng& rng)
{
    while (true) {
        Vector a = unit_vector(n, rng);
        std::sort(a.begin(), a.end(), std::greater<>());
        bool separated = true;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            separated = separated && a[i] - a[i + 1] > 1e-6;
        }
        if (separated) {
            return a;
        }
    }
}

Horofunction random_horofunction(std::size_t n, Rng& rng, Orientation orientation)
{
    Flat flat(random_rotation(n, rng));
    return Horofunction(std::move(flat), random_sorted_direction(n, rng), orientation);
}

SpdPoint random_spd(std::size_t n, double max_radius, Rng& rng)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Matrix q = random_rotation(n, rng);
    Vector lambda = unit_vector(n, rng);
    const double r = max_radius * unif(rng);
    for (auto& x : lambda) {
        x = std::exp(r * x);
    }
    return SpdPoint::from_spectral(q, lambda);
}

SampledHull iterated_geodesic_hull(std::span<const SpdPoint> points, std::size_t generations,
                                   std::size_t samples_per_pair, std::size_t budget, Rng& rng)
{
    SampledHull out;
    out.points.assign(points.begin(), points.end());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t g = 0; g < generations; ++g) {
        std::vector<SpdPoint> fresh;
        const std::size_t m = out.points.size();
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                for (std::size_t s = 0; s < samples_per_pair; ++s) {
                    fresh.push_back(geodesic_interpolate(out.points[i], out.points[j], unif(rng)));
                }
            }
        }
        const std::size_t room = budget > m ? budget - m : 0;
        if (fresh.size() > room) {
            out.truncated = true;
            std::shuffle(fresh.begin(), fresh.end(), rng);
            fresh.erase(fresh.begin() + static_cast<std::ptrdiff_t>(room), fresh.end());
        }
        for (auto& p : fresh) {
            out.points.push_back(std::move(p));
        }
        out.generations = g + 1;
    }
    return out;
}

namespace {

double distance_to_ray(const Horofunction& h, const SpdPoint& p, double t)
{
    const Geodesic ray(SpdPoint::identity(h.dim()), h.tangent());
    return metric_dist(geodesic_point(ray, t), p);
}

}  // namespace

double busemann_by_limit(const Horofunction& h, const SpdPoint& p, double t_max)
{
    if (!(t_max > 0.0)) {
        throw DomainError("busemann_by_limit: t_max must be positive");
    }
    return distance_to_ray(h, p, t_max) - t_max;
}

double busemann_by_limit_extrapolated(const Horofunction& h, const SpdPoint& p, double t_max)
{
    if (!(t_max > 0.0)) {
        throw DomainError("busemann_by_limit_extrapolated: t_max must be positive");
    }
    const double t1 = 0.5 * t_max;
    const double t2 = t_max;
    const double d1 = distance_to_ray(h, p, t1);
    const double d2 = distance_to_ray(h, p, t2);
    // (d² - t²) computed as (d - t)(d + t) to keep the cancellation exact.
    const double e1 = (d1 - t1) * (d1 + t1);
    const double e2 = (d2 - t2) * (d2 + t2);
    return (e2 - e1) / (2.0 * (t2 - t1));
}

std::vector<SampledExtent> extent_by_sampling(std::span<const SpdPoint> points, std::size_t direction_count,
                                              Rng& rng)
{
    if (points.empty()) {
        throw DomainError("extent_by_sampling: empty point set");
    }
    std::vector<SampledExtent> out;
    out.reserve(direction_count);
    for (std::size_t k = 0; k < direction_count; ++k) {
        Horofunction h = random_horofunction(points[0].dim(), rng);
        const double e = horoextent(h, points);
        out.push_back({std::move(h), e});
    }
    return out;
}

DepthReport random_horoball_depth(std::span<const SpdPoint> points, const SpdPoint& candidate, std::size_t trials,
                                  double epsilon, std::uint64_t seed)
{
    if (points.empty()) {
        throw DomainError("random_horoball_depth: empty point set");
    }
    const std::size_t n = points[0].dim();
    const std::size_t m = center_threshold(n, points.size());
    Rng rng(seed);
    DepthReport report;
    report.seed = seed;
    std::vector<double> values(points.size());
    for (std::size_t t = 0; t < trials; ++t) {
        const Horofunction h = random_horofunction(n, rng);
        for (std::size_t i = 0; i < points.size(); ++i) {
            values[i] = busemann(h, points[i]);
        }
        std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m - 1), values.end());
        const double level = values[m - 1];
        const double gap = busemann(h, candidate) - level;
        report.worst_gap = std::max(report.worst_gap, gap);
        if (gap > epsilon + 1e-6) {
            ++report.violations;
        }
        ++report.trials;
    }
    return report;
}

std::vector<SpdPoint> no_center_dataset(std::size_t count, double half_length)
{
    if (count == 0) {
        throw DomainError("no_center_dataset: count must be positive");
    }
    std::vector<SpdPoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double s =
            count == 1 ? 0.0 : -half_length + 2.0 * half_length * static_cast<double>(i) / static_cast<double>(count - 1);
        const Vector d{std::exp(s), std::exp(-s)};
        out.push_back(SpdPoint::from_spectral(Matrix::identity(2), d));
    }
    return out;
}

NoCenterProbe probe_no_center(std::span<const SpdPoint> points, const SpdPoint& candidate, std::size_t angle_samples)
{
    if (candidate.dim() != 2) {
        throw DomainError("probe_no_center: defined for PD(2)");
    }
    const SymMatrix root = candidate.sqrt();
    const Matrix root_d = root.dense();
    NoCenterProbe best;
    best.points_inside = points.size() + 1;
    for (std::size_t k = 0; k < angle_samples; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angle_samples);
        SymMatrix e(2);
        e(0, 0) = std::cos(phi) / std::numbers::sqrt2;
        e(1, 1) = -std::cos(phi) / std::numbers::sqrt2;
        e(0, 1) = std::sin(phi) / std::numbers::sqrt2;
        const SymMatrix w = congruence(root_d, e);
        const Geodesic ray(candidate, w);
        std::size_t inside = 0;
        for (const auto& x : points) {
            if (busemann_along(ray, x) <= 1e-9) {
                ++inside;
            }
        }
        if (inside < best.points_inside) {
            best.points_inside = inside;
            best.direction = w;
            best.candidate_value = busemann_along(ray, candidate);
        }
    }
    best.found = best.points_inside <= 1;
    return best;
}

}  // namespace pdgeo::oracles
