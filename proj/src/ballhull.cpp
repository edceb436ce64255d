#include "pdgeo/ballhull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "pdgeo/error.hpp"
#include "pdgeo/parallel.hpp"
#include "chart_util.hpp"

namespace pdgeo {

namespace {

constexpr double kSupportSlack = 1e-9;

double min_gap(const Vector& a)
{
    double g = INFINITY;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        g = std::min(g, a[i] - a[i + 1]);
    }
    return g;
}

Vector negated(const Vector& v)
{
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = -v[i];
    }
    return out;
}

void normalize(Vector& v)
{
    const double nrm = norm2(v);
    for (auto& x : v) {
        x /= nrm;
    }
}

Vector difference(const Vector& a, const Vector& b)
{
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

// Column j of the returned matrix is e_{perm[j]}; one column is negated when
// needed so the determinant is +1.
Matrix permutation_matrix(const std::vector<std::size_t>& perm)
{
    const std::size_t n = perm.size();
    Matrix p(n);
    for (std::size_t j = 0; j < n; ++j) {
        p(perm[j], j) = 1.0;
    }
    if (determinant(p) < 0.0) {
        p(perm[0], 0) = -1.0;
    }
    return p;
}

// Rank of a set of row vectors by Gaussian elimination with partial pivoting.
std::size_t row_rank(std::vector<Vector> rows, double tol)
{
    if (rows.empty()) {
        return 0;
    }
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (std::abs(rows[r][c]) > std::abs(rows[piv][c])) {
                piv = r;
            }
        }
        if (std::abs(rows[piv][c]) <= tol) {
            continue;
        }
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const double f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) {
                rows[r][k] -= f * rows[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

namespace detail {

// Generalized cross product of n-1 vectors in ℝⁿ.
Vector cross_product(const std::vector<Vector>& rows)
{
    const std::size_t n = rows.size() + 1;
    Vector u(n);
    for (std::size_t i = 0; i < n; ++i) {
        Matrix minor(n - 1);
        for (std::size_t r = 0; r + 1 < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != i) {
                    minor(r, cc++) = rows[r][c];
                }
            }
        }
        const double d = n - 1 == 1 ? minor(0, 0) : determinant(minor);
        u[i] = (i % 2 == 0 ? 1.0 : -1.0) * d;
    }
    return u;
}

}  // namespace detail

namespace {

using detail::cross_product;

std::vector<std::size_t> distinct_indices(const std::vector<Vector>& points)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dup = false;
        for (std::size_t j : out) {
            double diff = 0.0;
            for (std::size_t k = 0; k < points[i].size(); ++k) {
                diff = std::max(diff, std::abs(points[i][k] - points[j][k]));
            }
            if (diff <= 1e-12) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            out.push_back(i);
        }
    }
    return out;
}

double coordinate_scale(const std::vector<Vector>& points)
{
    double s = 1.0;
    for (const auto& p : points) {
        for (double v : p) {
            s = std::max(s, std::abs(v));
        }
    }
    return s;
}

std::vector<std::size_t> touching(const std::vector<Vector>& points, const Halfspace& h)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (std::abs(dot(h.normal, points[i]) - h.offset) <= kSupportSlack) {
            out.push_back(i);
        }
    }
    return out;
}

void add_facet(ChartHull& hull, const std::vector<Vector>& points, Halfspace h)
{
    for (const auto& f : hull.facets) {
        double diff = std::abs(f.offset - h.offset);
        for (std::size_t k = 0; k < h.normal.size(); ++k) {
            diff = std::max(diff, std::abs(f.normal[k] - h.normal[k]));
        }
        if (diff <= 1e-9) {
            return;
        }
    }
    hull.facet_vertices.push_back(touching(points, h));
    hull.facets.push_back(std::move(h));
}

double cross2(const Vector& o, const Vector& a, const Vector& b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns indices in counter-clockwise order.
std::vector<std::size_t> monotone_chain(const std::vector<Vector>& pts, std::vector<std::size_t> idx, double tol)
{
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return pts[a][0] < pts[b][0] || (pts[a][0] == pts[b][0] && pts[a][1] < pts[b][1]);
    });
    std::vector<std::size_t> h(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i : idx) {
        while (k >= 2 && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= tol) {
            --k;
        }
        h[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (std::size_t t = idx.size() - 1; t-- > 0;) {
        const std::size_t i = idx[t];
        while (k >= lower && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= tol) {
            --k;
        }
        h[k++] = i;
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

namespace detail {

// Sorted tie-bearing unit directions: projections of a net onto the walls
// a_i = a_{i+1} of the decreasing chamber.
std::vector<Vector> wall_directions(std::size_t n, double step)
{
    std::map<std::vector<long long>, Vector> seen;
    for (const auto& a : sphere_net(n, step)) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Vector w = a;
            const double avg = 0.5 * (w[i] + w[i + 1]);
            w[i] = avg;
            w[i + 1] = avg;
            if (norm2(w) < 1e-6) {
                continue;
            }
            normalize(w);
            std::sort(w.begin(), w.end(), std::greater<>());
            std::vector<long long> key;
            for (double v : w) {
                key.push_back(std::llround(v * 1e9));
            }
            seen.emplace(std::move(key), std::move(w));
        }
    }
    std::vector<Vector> out;
    for (auto& [k, v] : seen) {
        out.push_back(std::move(v));
    }
    return out;
}

// Dual horoball of ⟨u, y⟩ ≤ β in the chart of `rotation`, for -u in the
// closed decreasing chamber.
DualHoroball dualize(const Halfspace& h, const Matrix& rotation, const std::vector<Vector>& points)
{
    Vector a = negated(h.normal);
    const double gap = min_gap(a);
    if (gap > kDirectionGap) {
        return {Horoball{Horofunction(Flat(rotation), std::move(a)), h.offset}, false};
    }
    const std::size_t n = a.size();
    Vector w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = static_cast<double>(n - 1) - 2.0 * static_cast<double>(i);
    }
    normalize(w);
    const double w_gap = w[0] - w[1];
    const double eta = (3.0 * kDirectionGap - gap) / w_gap;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] += eta * w[i];
    }
    normalize(a);
    double level = -INFINITY;
    for (const auto& y : points) {
        if (dot(h.normal, y) <= h.offset + kSupportSlack) {
            level = std::max(level, -dot(a, y));
        }
    }
    if (level == -INFINITY) {
        level = h.offset;
    }
    return {Horoball{Horofunction(Flat(rotation), std::move(a)), level}, true};
}

Halfspace support_halfspace(const std::vector<Vector>& points, Vector u)
{
    double beta = -INFINITY;
    for (const auto& y : points) {
        beta = std::max(beta, dot(u, y));
    }
    return {std::move(u), beta};
}

bool in_closed_chamber(const Vector& a)
{
    double g = INFINITY;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        g = std::min(g, a[i] - a[i + 1]);
    }
    return g >= -1e-12;
}

std::size_t affine_rank(const std::vector<Vector>& points)
{
    if (points.empty()) {
        return 0;
    }
    double scale = 1.0;
    for (const auto& p : points) {
        for (double v : p) {
            scale = std::max(scale, std::abs(v));
        }
    }
    std::vector<Vector> diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        diffs.push_back(difference(points[i], points[0]));
    }
    return row_rank(std::move(diffs), 1e-10 * scale);
}

}  // namespace detail

namespace {

using detail::dualize;
using detail::in_closed_chamber;
using detail::support_halfspace;
using detail::wall_directions;

struct FlatWork {
    std::vector<HullHoroball> horoballs;
    std::vector<std::vector<Vector>> support;
};

Vector log_eigenvalues(const SpdPoint& p)
{
    Vector out = p.eig().values;
    for (auto& v : out) {
        v = std::log(v);
    }
    return out;
}

std::string cap_guidance(std::size_t n, double d_x, std::size_t cap)
{
    const auto k = static_cast<double>(binomial(n, 2));
    const double per_plane = std::floor(std::pow(static_cast<double>(cap), 1.0 / k) + 1e-9);
    const double s = 2.0 * std::numbers::pi / std::max(1.0, per_plane);
    const double delta = s * (k + 1.0) / 2.0;
    const double eps_min = 2.0 * delta * 2.0 * k * std::numbers::sqrt2 * std::sinh(d_x / std::numbers::sqrt2);
    std::ostringstream os;
    os.precision(6);
    os << "; with d_X = " << d_x << " the cap fits epsilon >= " << eps_min * (1.0 + 1e-9)
       << " (or raise --grid-cap)";
    return os.str();
}

}  // namespace

FlatChart project_to_rotation(std::span<const SpdPoint> points, const Matrix& rotation)
{
    FlatChart chart{rotation, {}};
    chart.points.reserve(points.size());
    for (const auto& x : points) {
        chart.points.push_back(flat_log_coordinates(x, rotation));
    }
    return chart;
}

FlatChart project_to_flat(std::span<const SpdPoint> points, const Flat& flat)
{
    for (const auto& x : points) {
        if (x.dim() != flat.dim()) {
            throw DomainError("project_to_flat: dimension mismatch");
        }
    }
    return project_to_rotation(points, flat.rotation());
}

std::vector<Vector> sphere_net(std::size_t n, double step)
{
    if (!(step > 0.0)) {
        throw DomainError("sphere_net: step must be positive");
    }
    if (n == 1) {
        return {{1.0}, {-1.0}};
    }
    if (n == 2) {
        const auto m = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / step - 1e-9));
        std::vector<Vector> out;
        for (std::size_t k = 0; k < m; ++k) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
            out.push_back({std::cos(t), std::sin(t)});
        }
        return out;
    }
    const auto rings = static_cast<std::size_t>(std::ceil(std::numbers::pi / step - 1e-9));
    std::vector<Vector> out;
    for (std::size_t k = 0; k <= rings; ++k) {
        const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(rings);
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        if (s < 1e-12) {
            Vector v(n, 0.0);
            v[0] = c > 0 ? 1.0 : -1.0;
            out.push_back(std::move(v));
            continue;
        }
        for (const auto& sub : sphere_net(n - 1, std::min(step / s, 2.0 * std::numbers::pi))) {
            Vector v(n);
            v[0] = c;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                v[i + 1] = s * sub[i];
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

ChartHull flat_convex_hull(const FlatChart& chart, double fallback_step)
{
    const auto& pts = chart.points;
    if (pts.empty()) {
        throw DomainError("flat_convex_hull: empty chart");
    }
    const std::size_t n = pts[0].size();
    const auto idx = distinct_indices(pts);
    const double scale = coordinate_scale(pts);

    std::vector<Vector> diffs;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        diffs.push_back(difference(pts[idx[i]], pts[idx[0]]));
    }
    const bool full = row_rank(diffs, 1e-10 * scale) == n;

    ChartHull hull;
    if (full && n == 2) {
        const auto ring = monotone_chain(pts, idx, 1e-12 * scale * scale);
        hull.vertices = ring;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Vector& p = pts[ring[i]];
            const Vector& q = pts[ring[(i + 1) % ring.size()]];
            Vector u{q[1] - p[1], p[0] - q[0]};
            normalize(u);
            const double beta = std::max(dot(u, p), dot(u, q));
            add_facet(hull, pts, {std::move(u), beta});
        }
        return hull;
    }
    if (full) {
        // Supporting hyperplanes through n-subsets of distinct points.
        std::vector<std::size_t> choose(n);
        std::vector<bool> is_vertex(pts.size(), false);
        std::vector<bool> mask(idx.size(), false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
        do {
            std::size_t c = 0;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (mask[i]) {
                    choose[c++] = idx[i];
                }
            }
            std::vector<Vector> rows;
            for (std::size_t r = 1; r < n; ++r) {
                rows.push_back(difference(pts[choose[r]], pts[choose[0]]));
            }
            Vector u = cross_product(rows);
            const double nu = norm2(u);
            if (nu <= 1e-10 * std::pow(scale, static_cast<double>(n - 1))) {
                continue;
            }
            for (auto& v : u) {
                v /= nu;
            }
            const double beta = dot(u, pts[choose[0]]);
            bool below = true;
            bool above = true;
            for (const auto& y : pts) {
                const double s = dot(u, y) - beta;
                below = below && s <= kSupportSlack;
                above = above && s >= -kSupportSlack;
            }
            if (above) {
                u = negated(u);
            }
            if (below || above) {
                Halfspace h{u, dot(u, pts[choose[0]])};
                for (std::size_t i : touching(pts, h)) {
                    is_vertex[i] = true;
                }
                add_facet(hull, pts, std::move(h));
            }
        } while (std::prev_permutation(mask.begin(), mask.end()));
        for (std::size_t i : idx) {
            if (is_vertex[i]) {
                hull.vertices.push_back(i);
            }
        }
        return hull;
    }
    hull.degenerate = true;
    hull.vertices = idx;
    for (auto& u : sphere_net(n, fallback_step)) {
        add_facet(hull, pts, support_halfspace(pts, std::move(u)));
    }
    return hull;
}

std::vector<Matrix> chamber_permutations(std::size_t n)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<Matrix> out;
    do {
        out.push_back(permutation_matrix(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

DualHoroball facet_to_horoball(const Halfspace& halfspace, const Flat& flat, std::span<const SpdPoint> points)
{
    const std::size_t n = flat.dim();
    if (halfspace.normal.size() != n) {
        throw DomainError("facet_to_horoball: normal has the wrong dimension");
    }
    if (std::abs(norm2(halfspace.normal) - 1.0) > 1e-9) {
        throw DomainError("facet_to_horoball: normal must be a unit vector");
    }
    const Vector a = negated(halfspace.normal);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
    const Matrix rotation = flat.rotation() * permutation_matrix(perm);

    Halfspace sorted{Vector(n), halfspace.offset};
    for (std::size_t j = 0; j < n; ++j) {
        sorted.normal[j] = halfspace.normal[perm[j]];
    }
    const FlatChart original = project_to_flat(points, flat);
    const FlatChart permuted = project_to_rotation(points, rotation);
    const DualHoroball dual = dualize(sorted, rotation, permuted.points);

    const double slack = kSupportSlack + (dual.perturbed ? 1e-7 * coordinate_scale(original.points) : 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double hs = dot(halfspace.normal, original.points[i]) - halfspace.offset;
        const double hb = busemann(dual.ball.horofunction, points[i]) - dual.ball.level;
        if ((hs <= -slack && hb > slack) || (hs > slack && hb <= -slack)) {
            throw DomainError("facet_to_horoball: halfspace and horoball disagree on point " + std::to_string(i) +
                              "; the normal lies outside this chart's chamber");
        }
    }
    return {dual.ball, dual.perturbed};
}

std::size_t discrete_one_center(std::span<const SpdPoint> points)
{
    if (points.empty()) {
        throw DomainError("discrete_one_center: empty point set");
    }
    std::size_t best = 0;
    double best_r = INFINITY;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < points.size() && r < best_r; ++j) {
            if (i != j) {
                r = std::max(r, metric_dist(points[i], points[j]));
            }
        }
        if (r < best_r) {
            best_r = r;
            best = i;
        }
    }
    return best;
}

BallHull build_eps_ball_hull(std::span<const SpdPoint> points, const HullOptions& options)
{
    if (points.empty()) {
        throw DomainError("build_eps_ball_hull: empty point set");
    }
    if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) {
        throw DomainError("build_eps_ball_hull: epsilon must be positive and finite");
    }
    const std::size_t n = points[0].dim();
    for (const auto& p : points) {
        if (p.dim() != n) {
            throw DomainError("build_eps_ball_hull: points have different dimensions");
        }
    }
    if (options.origin_index && *options.origin_index >= points.size()) {
        throw DomainError("build_eps_ball_hull: origin index out of range");
    }

    BallHull hull;
    hull.n = n;
    hull.epsilon = options.epsilon;
    hull.origin_shift = SpdPoint::identity(n);
    std::vector<SpdPoint> shifted(points.begin(), points.end());
    if (options.shift_origin) {
        const std::size_t origin = options.origin_index ? *options.origin_index : discrete_one_center(points);
        hull.origin_index = origin;
        hull.origin_shift = points[origin];
        for (auto& x : shifted) {
            x = translate_to_identity(hull.origin_shift, x);
        }
    }
    for (const auto& x : shifted) {
        hull.d_x = std::max(hull.d_x, norm2(log_eigenvalues(x)));
    }

    const GridResolution res = grid_resolution(options.epsilon, hull.d_x, n);
    try {
        hull.grid = grid_for(res, n, options.grid_cap);
    } catch (const ResourceError& e) {
        throw ResourceError(std::string(e.what()) + cap_guidance(n, hull.d_x, options.grid_cap));
    }
    const double net_step = res.single_flat ? 0.1 : res.delta;

    const auto chambers = chamber_permutations(n);
    const auto walls = wall_directions(n, net_step);
    std::vector<FlatWork> work(hull.grid.size());
    parallel_for(hull.grid.size(), options.threads, [&](std::size_t f) {
        FlatWork& out = work[f];
        out.support.resize(chambers.size());
        for (std::size_t c = 0; c < chambers.size(); ++c) {
            const Matrix rotation = hull.grid.flats[f].rotation() * chambers[c];
            const FlatChart chart = project_to_rotation(shifted, rotation);
            const ChartHull ch = flat_convex_hull(chart, net_step);
            for (std::size_t v : ch.vertices) {
                out.support[c].push_back(chart.points[v]);
            }
            std::vector<Halfspace> candidates = ch.facets;
            for (const auto& a : walls) {
                candidates.push_back(support_halfspace(chart.points, negated(a)));
            }
            for (const auto& h : candidates) {
                if (!in_closed_chamber(negated(h.normal))) {
                    continue;
                }
                DualHoroball d = dualize(h, rotation, chart.points);
                out.horoballs.push_back({std::move(d.ball), f, c, touching(chart.points, h), d.perturbed});
            }
        }
    });

    // Merge in flat order; drop horoballs matching an earlier one within 1e-9.
    // Buckets key on the level and the first tangent entry: many horoballs
    // share a level (every one supported at the origin has level 0).
    std::map<std::pair<long long, long long>, std::vector<std::size_t>> buckets;
    std::vector<SymMatrix> tangents;
    for (auto& w : work) {
        for (auto& hb : w.horoballs) {
            SymMatrix t = hb.ball.horofunction.tangent();
            const long long kl = std::llround(hb.ball.level * 1e9);
            const long long kt = std::llround(t(0, 0) * 1e9);
            bool dup = false;
            for (long long i = kl - 1; i <= kl + 1 && !dup; ++i) {
                for (long long j = kt - 1; j <= kt + 1 && !dup; ++j) {
                    auto it = buckets.find({i, j});
                    if (it == buckets.end()) {
                        continue;
                    }
                    for (std::size_t k : it->second) {
                        if (std::abs(hull.horoballs[k].ball.level - hb.ball.level) <= 1e-9 &&
                            max_abs_diff(tangents[k], t) <= 1e-9) {
                            dup = true;
                            break;
                        }
                    }
                }
            }
            if (!dup) {
                buckets[{kl, kt}].push_back(hull.horoballs.size());
                tangents.push_back(std::move(t));
                hull.horoballs.push_back(std::move(hb));
            }
        }
        hull.support_vertices.push_back(std::move(w.support));
    }
    return hull;
}

double hull_violation(const BallHull& hull, const SpdPoint& p)
{
    if (p.dim() != hull.n) {
        throw DomainError("hull_contains: dimension mismatch");
    }
    const bool shifted = !(hull.origin_shift.matrix() == SymMatrix::identity(hull.n));
    const SpdPoint q = shifted ? translate_to_identity(hull.origin_shift, p) : p;
    double worst = -INFINITY;
    const Matrix* last_rotation = nullptr;
    Vector y;
    for (const auto& hb : hull.horoballs) {
        const Horofunction& h = hb.ball.horofunction;
        if (last_rotation == nullptr || !(h.canonical_rotation() == *last_rotation)) {
            last_rotation = &h.canonical_rotation();
            y = flat_log_coordinates(q, *last_rotation);
        }
        worst = std::max(worst, -dot(h.canonical_direction(), y) - hb.ball.level);
    }
    return worst;
}

bool hull_contains(const BallHull& hull, const SpdPoint& p, double slack)
{
    return hull_violation(hull, p) <= slack;
}

double supported_level(const BallHull& hull, std::size_t flat_index, const Vector& a, Orientation orientation)
{
    if (flat_index >= hull.support_vertices.size()) {
        throw DomainError("supported_level: flat index out of range");
    }
    if (a.size() != hull.n || !in_closed_chamber(a)) {
        throw DomainError("supported_level: direction must be sorted in decreasing order");
    }
    const auto& charts = hull.support_vertices[flat_index];
    const bool plus = orientation == Orientation::Plus;
    const auto& verts = plus ? charts.front() : charts.back();
    Vector dir(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        dir[j] = plus ? a[j] : -a[a.size() - 1 - j];
    }
    double level = -INFINITY;
    for (const auto& y : verts) {
        level = std::max(level, -dot(dir, y));
    }
    return level;
}

double hull_extent(const BallHull& hull, std::size_t flat_index, const Vector& a)
{
    return std::abs(supported_level(hull, flat_index, a, Orientation::Plus) +
                    supported_level(hull, flat_index, a, Orientation::Minus));
}

}  // namespace pdgeo
