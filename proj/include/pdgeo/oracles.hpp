#pragma once

// Brute-force references for the test suite. The Busemann estimators here
// use only distances and geodesics from symcore.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdgeo/horofn.hpp"

namespace pdgeo::oracles {

using Rng = std::mt19937_64;

/// Haar-random proper rotation (Gaussian matrix, Gram-Schmidt, det fixed).
Matrix random_rotation(std::size_t n, Rng& rng);

/// Uniform random unit vector, sorted decreasing.
Vector random_sorted_direction(std::size_t n, Rng& rng);

Horofunction random_horofunction(std::size_t n, Rng& rng, Orientation orientation = Orientation::Plus);

/// Q e^{Λ} Qᵀ with Q random and ‖Λ‖ uniform in [0, max_radius], so d(p, I) ≤ max_radius.
SpdPoint random_spd(std::size_t n, double max_radius, Rng& rng);

struct SampledHull {
    std::vector<SpdPoint> points;
    std::size_t generations = 0;
    bool truncated = false;
};

/// Generation i+1 adds `samples_per_pair` geodesic points (t uniform in [0,1])
/// between every pair of generation i. When a generation would exceed
/// `budget` points, the new points are thinned uniformly to fit.
SampledHull iterated_geodesic_hull(std::span<const SpdPoint> points, std::size_t generations,
                                   std::size_t samples_per_pair, std::size_t budget, Rng& rng);

/// d(c(t_max), p) - t_max for the defining ray c of h.
double busemann_by_limit(const Horofunction& h, const SpdPoint& p, double t_max = 40.0);

/// Limit with the 1/t term removed: d(c(t),p)² - t² is affine in t up to
/// exponentially small terms, so its slope between t_max/2 and t_max over 2
/// estimates b(p).
double busemann_by_limit_extrapolated(const Horofunction& h, const SpdPoint& p, double t_max = 40.0);

struct SampledExtent {
    Horofunction horofunction;
    double extent;
};

std::vector<SampledExtent> extent_by_sampling(std::span<const SpdPoint> points, std::size_t direction_count,
                                              Rng& rng);

struct DepthReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst_gap = -INFINITY;  // max over trials of b(p̂) - level
    std::uint64_t seed = 0;
};

/// Per trial: random ray from I, level at the m-th smallest Busemann value
/// over X (m = ⌊N·d/(d+1)⌋ + 1); violation when b(p̂) > level + ε + 1e-6.
DepthReport random_horoball_depth(std::span<const SpdPoint> points, const SpdPoint& candidate, std::size_t trials,
                                  double epsilon, std::uint64_t seed);

/// diag(e^{s}, e^{-s}) for s equally spaced in [-half_length, half_length]:
/// points on one geodesic of the det = 1 slice of PD(2).
std::vector<SpdPoint> no_center_dataset(std::size_t count, double half_length);

struct NoCenterProbe {
    bool found = false;
    SymMatrix direction;  // unit tangent at the candidate of the probe's ray
    double candidate_value = 0.0;  // Busemann value at the candidate (0 by normalization)
    std::size_t points_inside = 0;
};

/// A horoball through `candidate` (the sublevel set b ≤ 0 of a ray leaving
/// it) holding at most one point of the dataset. Rays are searched over the
/// tangent directions of the det = 1 slice.
NoCenterProbe probe_no_center(std::span<const SpdPoint> points, const SpdPoint& candidate,
                              std::size_t angle_samples = 720);

}  // namespace pdgeo::oracles
