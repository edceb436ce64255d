#pragma once

// Discretization of the space of flat directions SO(n).
//
// Angles come in two units. A Givens factor carries the rotation angle of
// the matrix itself (the "Q-angle"). Its action on PD(2) by conjugation turns
// points about the scalar axis by twice that angle; grid steps and the
// Lipschitz bounds on Busemann functions are stated in that doubled angle θ.

#include <cstddef>
#include <vector>

#include "pdgeo/horofn.hpp"

namespace pdgeo {

struct GivensFactor {
    std::size_t i;
    std::size_t j;
    double angle;  // Q-angle in (-π, π]
};

/// Identity except the (i, j) plane: [[c, -s], [s, c]].
Matrix givens_matrix(std::size_t n, std::size_t i, std::size_t j, double angle);

/// Canonical plane order: (0,1), (0,2), …, (0,n-1), (1,2), …, (n-2,n-1).
std::vector<std::pair<std::size_t, std::size_t>> canonical_planes(std::size_t n);

/// Q = G₁ G₂ … G_k, k = C(n,2), planes in canonical order.
std::vector<GivensFactor> givens_decompose(const Matrix& q);
Matrix givens_compose(std::size_t n, const std::vector<GivensFactor>& factors);

/// max |Givens angle| of QᵀQ', symmetrized by also decomposing Q'ᵀQ. Q-angle units.
double angle_distance(const Matrix& q, const Matrix& q_prime);

/// Angle distance between flats: minimum over column sign flips of Q that
/// keep det = +1 (they describe the same rays).
double flat_distance(const Matrix& q, const Matrix& q_prime);

struct GridResolution {
    double delta;       // θ-units; meaningless when single_flat
    bool single_flat;   // d_X == 0: every point sits at I
};

/// δ = (ε/2) / (2·C(n,2)·√2·sinh(d_X/√2)).
GridResolution grid_resolution(double epsilon, double d_x, std::size_t n);

/// Resolution used for horo-center constraints: ε / (C(n,2)·2√2·sinh(d_X/√2)).
GridResolution center_grid_resolution(double epsilon, double d_x, std::size_t n);

struct DirectionGrid {
    std::size_t n = 0;
    double delta = 0.0;                         // θ-units
    double plane_step = 0.0;                    // per-plane θ step actually used
    std::vector<std::size_t> cells_per_plane;
    std::vector<Flat> flats;
    std::vector<std::vector<GivensFactor>> provenance;

    std::size_t size() const { return flats.size(); }
};

inline constexpr std::size_t kDefaultGridCap = 200'000;

/// Cartesian product over the canonical planes of Q-angles {k·s/2 : 0 ≤ k·s/2 < π},
/// with per-plane θ step s = 2δ/(C(n,2)+1) (s = δ for n = 2). Throws
/// ResourceError when the product exceeds `cap`.
DirectionGrid build_grid(std::size_t n, double delta, std::size_t cap = kDefaultGridCap);

/// The one-flat grid used when d_X == 0.
DirectionGrid single_flat_grid(std::size_t n);

/// Grid for a resolution; single flat when the resolution says so.
DirectionGrid grid_for(const GridResolution& res, std::size_t n, std::size_t cap = kDefaultGridCap);

/// Cell count build_grid would produce, without building it.
double grid_cell_count(std::size_t n, double delta);

/// Indices of flats that are pairwise distinct up to signed permutations.
std::vector<std::size_t> distinct_flats(const DirectionGrid& grid);

/// Index of the grid flat nearest to Q' and its flat_distance.
std::pair<std::size_t, double> nearest_flat(const DirectionGrid& grid, const Matrix& q_prime);

std::size_t binomial(std::size_t n, std::size_t k);

}  // namespace pdgeo
