#pragma once

// ε-approximate horo-center points.
//
// Every horoball of a grid flat that holds at least m = ⌊N·d/(d+1)⌋ + 1 of
// the N points (d = n(n+1)/2) becomes a constraint; a point inside all of
// them, with least log det, is returned.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdgeo/ballhull.hpp"

namespace pdgeo {

struct Constraint {
    Horoball ball;
    std::size_t flat_index;
    std::size_t chamber;
    std::vector<std::size_t> subset;  // defining points (empty for wall constraints)
    bool perturbed = false;
};

struct ConstraintSet {
    std::size_t n = 0;
    std::size_t count = 0;      // N
    std::size_t d = 0;
    std::size_t threshold = 0;  // m
    std::size_t grid_size = 0;
    std::vector<Constraint> constraints;
};

/// Smallest integer strictly greater than N·d/(d+1).
std::size_t center_threshold(std::size_t n, std::size_t count);

/// Constraints from every (flat, chamber) chart of the grid. Points are
/// used as given (no origin shift).
ConstraintSet generate_constraints(std::span<const SpdPoint> points, const DirectionGrid& grid,
                                   unsigned threads = 1);

/// max over constraints of b(p) - r.
double max_violation(const ConstraintSet& set, const SpdPoint& p);

struct SolverOptions {
    double tol = 1e-7;
    std::size_t max_iterations = 100'000;
};

struct CenterResult {
    SpdPoint point = SpdPoint::identity(2);          // in the caller's coordinates
    SpdPoint shifted_point = SpdPoint::identity(2);  // in the constraint set's coordinates
    double max_violation = 0.0;
    double objective = 0.0;  // log det of `point`
    std::size_t iterations = 0;
    std::size_t constraints_count = 0;
    std::size_t grid_size = 0;
    std::uint64_t seed = 0;
};

/// Feasibility by exact horoball projections (most violated first), then
/// bisection on log det p ≤ τ. Throws NumericError, carrying the best
/// violation, when no feasible point is reached within the iteration cap.
CenterResult solve_center(const ConstraintSet& set, const SolverOptions& options = {});

struct CenterOptions {
    double epsilon = 0.1;
    std::size_t grid_cap = kDefaultGridCap;
    unsigned threads = 1;
    bool shift_origin = true;
    std::optional<std::size_t> origin_index;
    std::size_t point_cap = 0;  // 0: 40 for n = 2, 25 for n = 3, 15 above
    SolverOptions solver;
    std::uint64_t seed = 0;
};

std::size_t default_point_cap(std::size_t n);

struct CenterRun {
    CenterResult result;
    ConstraintSet constraints;  // in shifted coordinates
    SpdPoint origin_shift = SpdPoint::identity(2);
    double d_x = 0.0;
};

CenterRun approx_horo_center(std::span<const SpdPoint> points, const CenterOptions& options);

}  // namespace pdgeo
