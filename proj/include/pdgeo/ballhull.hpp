#pragma once

// ε-ball hulls: finite horoball intersections whose horoextents along every
// ray from the origin match those of the data within ε.
//
// Per grid flat the data is projected into log coordinates, where horoballs
// of that flat are halfspaces, and a Euclidean hull is taken. The projection
// depends on the ordering of the direction (its Weyl chamber), so each flat
// is charted once per permutation of the axes and a facet is dualized only in
// the chart whose chamber contains its inward direction.

#include <optional>
#include <span>
#include <vector>

#include "pdgeo/dirgrid.hpp"
#include "pdgeo/horofn.hpp"

namespace pdgeo {

struct FlatChart {
    Matrix rotation;
    std::vector<Vector> points;  // log-diagonal of π_F(x), same order as X
};

/// ⟨normal, y⟩ ≤ offset, normal unit.
struct Halfspace {
    Vector normal;
    double offset;
};

struct ChartHull {
    std::vector<Halfspace> facets;
    std::vector<std::vector<std::size_t>> facet_vertices;  // chart point indices on each facet
    std::vector<std::size_t> vertices;                     // extreme points (all distinct points if degenerate)
    bool degenerate = false;
};

FlatChart project_to_flat(std::span<const SpdPoint> points, const Flat& flat);
FlatChart project_to_rotation(std::span<const SpdPoint> points, const Matrix& rotation);

/// Supporting halfspaces of the chart's point set. Full-dimensional input
/// gives the facets (n = 2: monotone chain; n ≥ 3: supporting-hyperplane
/// enumeration over n-subsets). Lower-dimensional input falls back to one
/// supporting halfspace per direction of a net of angular step `fallback_step`.
ChartHull flat_convex_hull(const FlatChart& chart, double fallback_step);

/// Unit vectors on S^{n-1} with neighbouring samples at most `step` apart.
std::vector<Vector> sphere_net(std::size_t n, double step);

struct DualHoroball {
    Horoball ball;
    bool perturbed = false;  // direction had tied entries and was separated
};

/// Horoball whose chart image is the halfspace. The direction -u is sorted
/// into decreasing order by a signed permutation of the flat; the result is
/// checked against X (membership must agree for every point) and a
/// DomainError is raised when the halfspace lives in a different chamber's
/// chart. Tied entries are separated by a minimal perturbation and the level
/// is reset to the largest Busemann value over the points the halfspace held.
DualHoroball facet_to_horoball(const Halfspace& halfspace, const Flat& flat, std::span<const SpdPoint> points);

/// Axis permutation matrices (det-corrected) in lexicographic order; the
/// identity is first and the order reversal last.
std::vector<Matrix> chamber_permutations(std::size_t n);

struct HullHoroball {
    Horoball ball;
    std::size_t flat_index;
    std::size_t chamber;
    std::vector<std::size_t> facet_vertices;  // indices into X
    bool perturbed = false;
};

struct HullOptions {
    double epsilon = 0.1;
    std::size_t grid_cap = kDefaultGridCap;
    unsigned threads = 1;
    bool shift_origin = true;
    std::optional<std::size_t> origin_index;  // default: discrete 1-center
};

struct BallHull {
    std::size_t n = 0;
    double epsilon = 0.0;
    double d_x = 0.0;
    SpdPoint origin_shift = SpdPoint::identity(2);
    std::optional<std::size_t> origin_index;
    DirectionGrid grid;
    std::vector<HullHoroball> horoballs;
    // support_vertices[flat_index][chamber]: chart coordinates of hull vertices
    std::vector<std::vector<std::vector<Vector>>> support_vertices;
};

/// Index minimizing the largest distance to the other points (ties: lowest).
std::size_t discrete_one_center(std::span<const SpdPoint> points);

BallHull build_eps_ball_hull(std::span<const SpdPoint> points, const HullOptions& options);

/// b(p̂) ≤ r + slack for every horoball, p̂ = p translated by the origin shift.
bool hull_contains(const BallHull& hull, const SpdPoint& p, double slack = 1e-9);

/// Largest violation max_i (b_i(p̂) - r_i) over the hull's horoballs.
double hull_violation(const BallHull& hull, const SpdPoint& p);

/// max over X of b for the horofunction (grid flat, a, orientation),
/// read off the chart hull vertices. `a` sorted decreasing, unit.
double supported_level(const BallHull& hull, std::size_t flat_index, const Vector& a, Orientation orientation);

/// |supported_level(+) + supported_level(-)|
double hull_extent(const BallHull& hull, std::size_t flat_index, const Vector& a);

}  // namespace pdgeo
