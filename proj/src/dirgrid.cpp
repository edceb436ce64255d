#include "pdgeo/dirgrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "pdgeo/error.hpp"

namespace pdgeo {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_angle(const std::vector<GivensFactor>& f)
{
    double m = 0.0;
    for (const auto& g : f) {
        m = std::max(m, std::abs(g.angle));
    }
    return m;
}

// All diagonal sign matrices with det +1.
std::vector<Vector> proper_sign_patterns(std::size_t n)
{
    std::vector<Vector> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        if (__builtin_popcountll(mask) % 2 != 0) {
            continue;
        }
        Vector s(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                s[i] = -1.0;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

Matrix scale_columns(const Matrix& q, const Vector& s)
{
    Matrix out = q;
    for (std::size_t i = 0; i < q.dim(); ++i) {
        for (std::size_t j = 0; j < q.dim(); ++j) {
            out(i, j) *= s[j];
        }
    }
    return out;
}

// Lower end of the Q-angle range sampled for a plane. The leading plane of
// each column spans [0, π); the others [-π/2, π/2). Together with column
// sign flips this reaches every flat.
double plane_range_start(std::size_t i, std::size_t j)
{
    return j == i + 1 ? 0.0 : -kPi / 2.0;
}

std::size_t cells_for(double plane_step)
{
    return static_cast<std::size_t>(std::ceil(2.0 * kPi / plane_step - 1e-9));
}

double plane_step_for(std::size_t n, double delta)
{
    const auto k = static_cast<double>(binomial(n, 2));
    return 2.0 * delta / (k + 1.0);
}

}  // namespace

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0;
    }
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

Matrix givens_matrix(std::size_t n, std::size_t i, std::size_t j, double angle)
{
    Matrix g = Matrix::identity(n);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    g(i, i) = c;
    g(i, j) = -s;
    g(j, i) = s;
    g(j, j) = c;
    return g;
}

std::vector<std::pair<std::size_t, std::size_t>> canonical_planes(std::size_t n)
{
    std::vector<std::pair<std::size_t, std::size_t>> planes;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            planes.emplace_back(i, j);
        }
    }
    return planes;
}

std::vector<GivensFactor> givens_decompose(const Matrix& q)
{
    const std::size_t n = q.dim();
    if (max_abs_diff(q.transposed() * q, Matrix::identity(n)) > 1e-9) {
        throw DomainError("givens_decompose: matrix is not orthogonal");
    }
    if (determinant(q) < 0.0) {
        throw DomainError("givens_decompose: determinant is -1, not a rotation");
    }
    Matrix m = q;
    std::vector<GivensFactor> out;
    for (auto [p, r] : canonical_planes(n)) {
        const double angle = std::atan2(m(r, p), m(p, p));
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        for (std::size_t col = 0; col < n; ++col) {
            const double xp = m(p, col);
            const double xr = m(r, col);
            m(p, col) = c * xp + s * xr;
            m(r, col) = -s * xp + c * xr;
        }
        out.push_back({p, r, angle == -kPi ? kPi : angle});
    }
    return out;
}

Matrix givens_compose(std::size_t n, const std::vector<GivensFactor>& factors)
{
    Matrix q = Matrix::identity(n);
    for (const auto& g : factors) {
        q = q * givens_matrix(n, g.i, g.j, g.angle);
    }
    return q;
}

double angle_distance(const Matrix& q, const Matrix& q_prime)
{
    const Matrix r = q.transposed() * q_prime;
    return std::max(max_abs_angle(givens_decompose(r)), max_abs_angle(givens_decompose(r.transposed())));
}

double flat_distance(const Matrix& q, const Matrix& q_prime)
{
    double best = INFINITY;
    for (const auto& s : proper_sign_patterns(q.dim())) {
        best = std::min(best, angle_distance(scale_columns(q, s), q_prime));
    }
    return best;
}

GridResolution grid_resolution(double epsilon, double d_x, std::size_t n)
{
    if (!(epsilon > 0.0)) {
        throw DomainError("grid_resolution: epsilon must be positive");
    }
    if (!(d_x >= 0.0)) {
        throw DomainError("grid_resolution: d_X must be nonnegative");
    }
    if (d_x == 0.0) {
        return {0.0, true};
    }
    const auto k = static_cast<double>(binomial(n, 2));
    const double delta = (epsilon / 2.0) / (2.0 * k * std::numbers::sqrt2 * std::sinh(d_x / std::numbers::sqrt2));
    return {delta, false};
}

GridResolution center_grid_resolution(double epsilon, double d_x, std::size_t n)
{
    // Same formula with ε in place of ε/2.
    return grid_resolution(2.0 * epsilon, d_x, n);
}

double grid_cell_count(std::size_t n, double delta)
{
    const double s = plane_step_for(n, delta);
    return std::pow(static_cast<double>(cells_for(s)), static_cast<double>(binomial(n, 2)));
}

DirectionGrid build_grid(std::size_t n, double delta, std::size_t cap)
{
    if (n < 2) {
        throw DomainError("build_grid: dimension must be at least 2");
    }
    if (!(delta > 0.0)) {
        throw DomainError("build_grid: delta must be positive");
    }
    const double total = grid_cell_count(n, delta);
    if (total > static_cast<double>(cap)) {
        std::ostringstream count;
        count.precision(15);
        count << total;
        throw ResourceError("build_grid: grid needs " + count.str() +
                            " cells, cap is " + std::to_string(cap));
    }
    DirectionGrid grid;
    grid.n = n;
    grid.delta = delta;
    grid.plane_step = plane_step_for(n, delta);
    const auto planes = canonical_planes(n);
    const std::size_t cells = cells_for(grid.plane_step);
    grid.cells_per_plane.assign(planes.size(), cells);

    std::vector<std::size_t> idx(planes.size(), 0);
    const auto count = static_cast<std::size_t>(total);
    grid.flats.reserve(count);
    grid.provenance.reserve(count);
    for (std::size_t cell = 0; cell < count; ++cell) {
        std::vector<GivensFactor> factors;
        factors.reserve(planes.size());
        for (std::size_t k = 0; k < planes.size(); ++k) {
            const auto [i, j] = planes[k];
            const double angle = plane_range_start(i, j) + kPi * static_cast<double>(idx[k]) / static_cast<double>(cells);
            factors.push_back({i, j, angle});
        }
        grid.flats.emplace_back(givens_compose(n, factors));
        grid.provenance.push_back(std::move(factors));
        for (std::size_t k = planes.size(); k-- > 0;) {
            if (++idx[k] < cells) {
                break;
            }
            idx[k] = 0;
        }
    }
    return grid;
}

DirectionGrid single_flat_grid(std::size_t n)
{
    DirectionGrid grid;
    grid.n = n;
    grid.flats.push_back(Flat::identity(n));
    std::vector<GivensFactor> factors;
    for (auto [i, j] : canonical_planes(n)) {
        factors.push_back({i, j, 0.0});
    }
    grid.provenance.push_back(std::move(factors));
    grid.cells_per_plane.assign(binomial(n, 2), 1);
    return grid;
}

DirectionGrid grid_for(const GridResolution& res, std::size_t n, std::size_t cap)
{
    return res.single_flat ? single_flat_grid(n) : build_grid(n, res.delta, cap);
}

std::vector<std::size_t> distinct_flats(const DirectionGrid& grid)
{
    // Key: columns up to sign, sorted; coordinates rounded to 1e-8.
    std::map<std::vector<long long>, std::size_t> seen;
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < grid.flats.size(); ++f) {
        const Matrix& q = grid.flats[f].rotation();
        const std::size_t n = q.dim();
        std::vector<std::vector<long long>> cols(n);
        for (std::size_t j = 0; j < n; ++j) {
            Vector c = q.column(j);
            double sign = 1.0;
            for (double v : c) {
                if (std::abs(v) > 1e-7) {
                    sign = v > 0.0 ? 1.0 : -1.0;
                    break;
                }
            }
            for (double v : c) {
                cols[j].push_back(std::llround(sign * v * 1e8));
            }
        }
        std::sort(cols.begin(), cols.end());
        std::vector<long long> key;
        for (const auto& c : cols) {
            key.insert(key.end(), c.begin(), c.end());
        }
        if (seen.emplace(std::move(key), f).second) {
            out.push_back(f);
        }
    }
    return out;
}

std::pair<std::size_t, double> nearest_flat(const DirectionGrid& grid, const Matrix& q_prime)
{
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t f = 0; f < grid.flats.size(); ++f) {
        const double d = flat_distance(grid.flats[f].rotation(), q_prime);
        if (d < best_d) {
            best_d = d;
            best = f;
        }
    }
    return {best, best_d};
}

}  // namespace pdgeo
