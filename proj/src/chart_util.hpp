#pragma once

// Chart-level helpers shared by the hull and center constructions.

#include <vector>

#include "pdgeo/ballhull.hpp"

namespace pdgeo::detail {

/// Generalized cross product of n-1 row vectors in ℝⁿ (unnormalized).
Vector cross_product(const std::vector<Vector>& rows);

/// Sorted unit directions with at least one tied pair, sampled at `step`.
std::vector<Vector> wall_directions(std::size_t n, double step);

/// Dual horoball of ⟨u, y⟩ ≤ β in the chart of `rotation`; -u must lie in
/// the closed decreasing chamber. Tied directions are separated and the
/// level reset over the chart points inside the halfspace.
DualHoroball dualize(const Halfspace& h, const Matrix& rotation, const std::vector<Vector>& points);

/// Halfspace with normal u at the largest ⟨u, y⟩.
Halfspace support_halfspace(const std::vector<Vector>& points, Vector u);

bool in_closed_chamber(const Vector& a);

/// Dimension of the affine span.
std::size_t affine_rank(const std::vector<Vector>& points);

}  // namespace pdgeo::detail
