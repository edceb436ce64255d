#include "pdgeo/centerpt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chart_util.hpp"
#include "pdgeo/error.hpp"
#include "pdgeo/parallel.hpp"

namespace pdgeo {

namespace {

constexpr double kCountSlack = 1e-9;
// Bisection stops once the log det bracket is this narrow.
constexpr double kObjectiveTol = 1e-5;

Vector negated(const Vector& v)
{
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = -v[i];
    }
    return out;
}

std::size_t count_inside(const std::vector<Vector>& points, const Halfspace& h)
{
    std::size_t c = 0;
    for (const auto& y : points) {
        if (dot(h.normal, y) <= h.offset + kCountSlack) {
            ++c;
        }
    }
    return c;
}

// Halfspace with normal u holding exactly the m smallest values of ⟨u, y⟩.
Halfspace quantile_halfspace(const std::vector<Vector>& points, Vector u, std::size_t m)
{
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& y : points) {
        v.push_back(dot(u, y));
    }
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m - 1), v.end());
    return {std::move(u), v[m - 1]};
}

// Constraints of one chart: hyperplanes through n-subsets, quantile
// halfspaces at the chamber walls, and a direction net when the chart is
// lower-dimensional.
void chart_constraints(const std::vector<Vector>& y, const Matrix& rotation, std::size_t m,
                       const std::vector<Vector>& walls, double net_step, std::size_t flat, std::size_t chamber,
                       std::vector<Constraint>& out)
{
    const std::size_t n = rotation.dim();
    const std::size_t count = y.size();
    auto emit = [&](const Halfspace& h, std::vector<std::size_t> subset) {
        if (!detail::in_closed_chamber(negated(h.normal))) {
            return;
        }
        DualHoroball d = detail::dualize(h, rotation, y);
        out.push_back({std::move(d.ball), flat, chamber, std::move(subset), d.perturbed});
    };

    std::vector<bool> mask(count, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
    std::vector<std::size_t> subset(n);
    do {
        std::size_t c = 0;
        for (std::size_t i = 0; i < count; ++i) {
            if (mask[i]) {
                subset[c++] = i;
            }
        }
        std::vector<Vector> rows;
        for (std::size_t r = 1; r < n; ++r) {
            Vector diff(n);
            for (std::size_t k = 0; k < n; ++k) {
                diff[k] = y[subset[r]][k] - y[subset[0]][k];
            }
            rows.push_back(std::move(diff));
        }
        Vector u = detail::cross_product(rows);
        const double nu = norm2(u);
        if (nu <= 1e-12) {
            continue;
        }
        for (auto& v : u) {
            v /= nu;
        }
        for (double sign : {1.0, -1.0}) {
            Vector su(n);
            for (std::size_t k = 0; k < n; ++k) {
                su[k] = sign * u[k];
            }
            Halfspace h{su, dot(su, y[subset[0]])};
            if (count_inside(y, h) >= m) {
                emit(h, subset);
            }
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));

    for (const auto& a : walls) {
        emit(quantile_halfspace(y, negated(a), m), {});
    }
    if (detail::affine_rank(y) < n) {
        for (auto& u : sphere_net(n, net_step)) {
            emit(quantile_halfspace(y, std::move(u), m), {});
        }
    }
}

struct ChartGroup {
    Matrix rotation;
    std::vector<std::size_t> members;
};

std::vector<ChartGroup> group_by_chart(const ConstraintSet& set)
{
    std::vector<ChartGroup> groups;
    for (std::size_t i = 0; i < set.constraints.size(); ++i) {
        const Matrix& r = set.constraints[i].ball.horofunction.canonical_rotation();
        if (groups.empty() || !(groups.back().rotation == r)) {
            groups.push_back({r, {}});
        }
        groups.back().members.push_back(i);
    }
    return groups;
}

struct Worst {
    double value = -INFINITY;
    std::size_t index = 0;
};

Worst worst_constraint(const ConstraintSet& set, const std::vector<ChartGroup>& groups, const SpdPoint& p)
{
    Worst w;
    for (const auto& g : groups) {
        const Vector y = flat_log_coordinates(p, g.rotation);
        for (std::size_t i : g.members) {
            const Horoball& b = set.constraints[i].ball;
            const double v = -dot(b.horofunction.canonical_direction(), y) - b.level;
            if (v > w.value) {
                w = {v, i};
            }
        }
    }
    return w;
}

// Projection-based feasibility for the constraints plus, optionally,
// log det p ≤ tau. The log det bound is the sublevel set of a Busemann
// function of the scalar ray (gradient norm √n), projected onto by scaling.
class Projector {
public:
    Projector(const ConstraintSet& set, double tol)
        : set_(set), groups_(group_by_chart(set)), tol_(tol), root_n_(std::sqrt(static_cast<double>(set.n)))
    {
    }

    double violation(const SpdPoint& p) const
    {
        return set_.constraints.empty() ? -INFINITY : worst_constraint(set_, groups_, p).value;
    }

    // Returns true once every constraint holds within tol. `budget` is
    // decremented per projection.
    bool run(SpdPoint& p, const double* tau, std::size_t& budget, std::size_t& iterations) const
    {
        double best = INFINITY;
        std::size_t since_best = 0;
        while (true) {
            const Worst w = set_.constraints.empty() ? Worst{} : worst_constraint(set_, groups_, p);
            const double det_v = tau ? (p.log_det() - *tau) / root_n_ : -INFINITY;
            const double v = std::max(w.value, det_v);
            if (v <= tol_) {
                return true;
            }
            if (budget == 0) {
                return false;
            }
            if (v < best * (1.0 - 1e-3)) {
                best = v;
                since_best = 0;
            } else if (++since_best > kStallLimit) {
                return false;
            }
            --budget;
            ++iterations;
            const double step = v + 0.5 * tol_;
            if (det_v >= w.value) {
                const double scale = std::exp(-step * root_n_ / static_cast<double>(set_.n));
                p = SpdPoint(scale * p.matrix());
            } else {
                p = horo_flow(set_.constraints[w.index].ball.horofunction, p, step);
            }
        }
    }

private:
    static constexpr std::size_t kStallLimit = 2000;
    const ConstraintSet& set_;
    std::vector<ChartGroup> groups_;
    double tol_;
    double root_n_;
};

}  // namespace

std::size_t center_threshold(std::size_t n, std::size_t count)
{
    const std::size_t d = n * (n + 1) / 2;
    return count * d / (d + 1) + 1;
}

std::size_t default_point_cap(std::size_t n)
{
    return n <= 2 ? 40 : n == 3 ? 25 : 15;
}

ConstraintSet generate_constraints(std::span<const SpdPoint> points, const DirectionGrid& grid, unsigned threads)
{
    const std::size_t n = grid.n;
    if (points.size() < n) {
        throw DomainError("generate_constraints: need at least n points");
    }
    for (const auto& p : points) {
        if (p.dim() != n) {
            throw DomainError("generate_constraints: point dimension does not match the grid");
        }
    }
    ConstraintSet set;
    set.n = n;
    set.count = points.size();
    set.d = n * (n + 1) / 2;
    set.threshold = center_threshold(n, points.size());
    set.grid_size = grid.size();

    const double net_step = grid.delta > 0.0 ? grid.delta : 0.1;
    const auto chambers = chamber_permutations(n);
    const auto walls = detail::wall_directions(n, net_step);
    std::vector<std::vector<Constraint>> per_flat(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t f) {
        for (std::size_t c = 0; c < chambers.size(); ++c) {
            const Matrix rotation = grid.flats[f].rotation() * chambers[c];
            const FlatChart chart = project_to_rotation(points, rotation);
            chart_constraints(chart.points, rotation, set.threshold, walls, net_step, f, c, per_flat[f]);
        }
    });
    for (auto& v : per_flat) {
        std::move(v.begin(), v.end(), std::back_inserter(set.constraints));
    }
    return set;
}

double max_violation(const ConstraintSet& set, const SpdPoint& p)
{
    if (set.constraints.empty()) {
        return -INFINITY;
    }
    return worst_constraint(set, group_by_chart(set), p).value;
}

CenterResult solve_center(const ConstraintSet& set, const SolverOptions& options)
{
    if (!(options.tol > 0.0)) {
        throw DomainError("solve_center: tol must be positive");
    }
    const Projector proj(set, options.tol);
    std::size_t budget = options.max_iterations;
    std::size_t iterations = 0;

    SpdPoint p = SpdPoint::identity(set.n);
    if (!proj.run(p, nullptr, budget, iterations)) {
        throw NumericError("solve_center: no feasible point within the iteration cap (best max violation " +
                           std::to_string(proj.violation(p)) + ")");
    }

    // Bisection on the log det bound, warm-started from the best feasible point.
    SpdPoint best = p;
    double hi = best.log_det();
    double lo = hi;
    double step = 1.0;
    for (int k = 0; k < 12; ++k) {
        SpdPoint trial = best;
        const double tau = hi - step;
        if (!proj.run(trial, &tau, budget, iterations)) {
            lo = tau;
            break;
        }
        best = trial;
        hi = best.log_det();
        step *= 2.0;
    }
    for (int k = 0; k < 40 && hi - lo > kObjectiveTol && budget > 0; ++k) {
        SpdPoint trial = best;
        const double tau = 0.5 * (lo + hi);
        if (proj.run(trial, &tau, budget, iterations)) {
            best = trial;
            hi = std::min(tau, best.log_det());
        } else {
            lo = tau;
        }
    }

    CenterResult r;
    r.point = best;
    r.shifted_point = best;
    r.max_violation = set.constraints.empty() ? 0.0 : proj.violation(best);
    r.objective = best.log_det();
    r.iterations = iterations;
    r.constraints_count = set.constraints.size();
    r.grid_size = set.grid_size;
    return r;
}

CenterRun approx_horo_center(std::span<const SpdPoint> points, const CenterOptions& options)
{
    if (points.empty()) {
        throw DomainError("approx_horo_center: empty point set");
    }
    const std::size_t n = points[0].dim();
    for (const auto& p : points) {
        if (p.dim() != n) {
            throw DomainError("approx_horo_center: points have different dimensions");
        }
    }
    if (points.size() < n + 1) {
        throw DomainError("approx_horo_center: need at least n + 1 points");
    }
    if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) {
        throw DomainError("approx_horo_center: epsilon must be positive and finite");
    }
    const std::size_t cap = options.point_cap ? options.point_cap : default_point_cap(n);
    if (points.size() > cap) {
        throw ResourceError("approx_horo_center: " + std::to_string(points.size()) + " points exceed the cap of " +
                            std::to_string(cap) + " for n = " + std::to_string(n) +
                            "; constraint enumeration grows like N^n per flat, subsample the data");
    }
    if (options.origin_index && *options.origin_index >= points.size()) {
        throw DomainError("approx_horo_center: origin index out of range");
    }

    CenterRun run;
    run.origin_shift = SpdPoint::identity(n);
    std::vector<SpdPoint> shifted(points.begin(), points.end());
    if (options.shift_origin) {
        const std::size_t origin = options.origin_index ? *options.origin_index : discrete_one_center(points);
        run.origin_shift = points[origin];
        for (auto& x : shifted) {
            x = translate_to_identity(run.origin_shift, x);
        }
    }
    for (const auto& x : shifted) {
        run.d_x = std::max(run.d_x, metric_dist(SpdPoint::identity(n), x));
    }
    const DirectionGrid grid = grid_for(center_grid_resolution(options.epsilon, run.d_x, n), n, options.grid_cap);
    run.constraints = generate_constraints(shifted, grid, options.threads);
    run.result = solve_center(run.constraints, options.solver);
    run.result.point = options.shift_origin ? translate_from_identity(run.origin_shift, run.result.shifted_point)
                                            : run.result.shifted_point;
    run.result.objective = run.result.point.log_det();
    run.result.seed = options.seed;
    return run;
}

}  // namespace pdgeo
