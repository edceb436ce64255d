#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pdgeo/ballhull.hpp"
#include "pdgeo/centerpt.hpp"
#include "pdgeo/error.hpp"
#include "pdgeo/oracles.hpp"

using namespace pdgeo;
using testutil::diag;

namespace {

std::size_t recount(const Horoball& ball, std::span<const SpdPoint> xs)
{
    std::size_t k = 0;
    for (const auto& x : xs) {
        k += busemann(ball.horofunction, x) <= ball.level + 1e-9 ? 1 : 0;
    }
    return k;
}

double dist_to_segment(const SpdPoint& p, double half_length)
{
    double best = INFINITY;
    for (int k = 0; k <= 2000; ++k) {
        const double s = -half_length + 2 * half_length * k / 2000.0;
        best = std::min(best, metric_dist(p, diag({std::exp(s), std::exp(-s)})));
    }
    return best;
}

}  // namespace

TEST_SUITE("centerpt")
{
    TEST_CASE("depth threshold")
    {
        CHECK(center_threshold(2, 4) == 4);
        CHECK(center_threshold(2, 20) == 16);
        CHECK(center_threshold(2, 8) == 7);
        CHECK(center_threshold(3, 7) == 7);
        CHECK(center_threshold(3, 14) == 13);
        CHECK(center_threshold(2, 1) == 1);
    }

    TEST_CASE("identical points: every constraint holds the identity")
    {
        const std::vector<SpdPoint> xs(6, SpdPoint::identity(2));
        const auto set = generate_constraints(xs, build_grid(2, 0.5));
        CHECK(set.threshold == center_threshold(2, 6));
        CHECK_FALSE(set.constraints.empty());
        for (const auto& c : set.constraints) {
            CHECK(c.ball.contains(SpdPoint::identity(2), 1e-9));
        }
    }

    TEST_CASE("collinear chart: half-lines at the order statistic")
    {
        // Chart points (t, -t), t = 0..7, in the identity flat.
        std::vector<SpdPoint> xs;
        for (int t = 0; t < 8; ++t) {
            xs.push_back(diag({std::exp(t), std::exp(-t)}));
        }
        const auto set = generate_constraints(xs, single_flat_grid(2));
        const std::size_t m = set.threshold;
        REQUIRE(m == 7);
        std::size_t quantile = 0;
        for (const auto& c : set.constraints) {
            const auto& h = c.ball.horofunction;
            std::vector<double> b;
            for (const auto& x : xs) {
                b.push_back(busemann(h, x));
            }
            std::sort(b.begin(), b.end());
            // The level is never below the m-th smallest value.
            CHECK(c.ball.level >= b[m - 1] - 1e-9);
            // Quantile constraints sit exactly at the m-th value (tie-broken
            // ones are re-leveled over the points they hold).
            if (c.subset.empty() && !c.perturbed) {
                CHECK(c.ball.level == doctest::Approx(b[m - 1]).epsilon(1e-9));
                ++quantile;
            }
        }
        CHECK(quantile > 0);
    }

    TEST_CASE("every constraint holds at least the threshold")
    {
        oracles::Rng rng(61);
        for (std::size_t n : {2u, 3u}) {
            std::vector<SpdPoint> xs;
            for (int i = 0; i < (n == 2 ? 12 : 8); ++i) {
                xs.push_back(oracles::random_spd(n, 1.0, rng));
            }
            const auto grid = build_grid(n, n == 2 ? 0.3 : 1.5);
            const auto set = generate_constraints(xs, grid, 2);
            CHECK(set.grid_size == grid.size());
            CHECK(set.count == xs.size());
            CHECK(set.d == n * (n + 1) / 2);
            CHECK_FALSE(set.constraints.empty());
            for (const auto& c : set.constraints) {
                CHECK(recount(c.ball, xs) >= set.threshold);
                CHECK(c.flat_index < grid.size());
                CHECK((c.subset.empty() || c.subset.size() == n));
            }
        }
    }

    TEST_CASE("two crossing constraints pin the identity")
    {
        // b ≤ 0 in the identity flat and in the axis-swapped flat: log det is
        // bounded below by 0, attained only at I.
        ConstraintSet set;
        set.n = 2;
        set.count = 1;
        set.d = 3;
        set.threshold = 1;
        set.grid_size = 1;
        const Vector a{0.8, 0.6};
        set.constraints.push_back({{Horofunction(Flat::identity(2), a), 0.0}, 0, 0, {}, false});
        set.constraints.push_back({{Horofunction(Flat(chamber_permutations(2).back()), a), 0.0}, 0, 1, {}, false});
        const auto r = solve_center(set);
        CHECK(r.max_violation <= 1e-7);
        CHECK(std::abs(r.objective) <= 1e-4);
        CHECK(metric_dist(r.point, SpdPoint::identity(2)) <= 1e-2);
        CHECK(max_violation(set, SpdPoint::identity(2)) <= 0.0);
    }

    TEST_CASE("infeasible constraints raise a numeric error")
    {
        ConstraintSet set;
        set.n = 2;
        set.grid_size = 1;
        const Horofunction h(Flat::identity(2), Vector{0.8, -0.6});
        set.constraints.push_back({{h, -1.0}, 0, 0, {}, false});
        set.constraints.push_back({{h.opposite(), -1.0}, 0, 0, {}, false});
        SolverOptions opt;
        opt.max_iterations = 2000;
        try {
            solve_center(set, opt);
            FAIL("expected a numeric error");
        } catch (const NumericError& e) {
            CHECK(std::string(e.what()).find("best max violation") != std::string::npos);
        }
        opt.tol = 0.0;
        CHECK_THROWS_AS(solve_center(set, opt), DomainError);
    }

    TEST_CASE("data symmetric about the chart origin keeps the identity feasible")
    {
        std::vector<SpdPoint> xs;
        for (auto [u, v] : {std::pair{1.0, 0.2}, std::pair{-0.3, 0.8}, std::pair{0.5, -0.9}, std::pair{0.1, 0.1}}) {
            xs.push_back(diag({std::exp(u), std::exp(v)}));
            xs.push_back(diag({std::exp(-u), std::exp(-v)}));
        }
        const auto set = generate_constraints(xs, single_flat_grid(2));
        CHECK(max_violation(set, SpdPoint::identity(2)) <= 1e-12);
        const auto r = solve_center(set);
        CHECK(r.max_violation <= 1e-7);
    }

    TEST_CASE("near-identical points give a center at the identity")
    {
        oracles::Rng rng(62);
        std::vector<SpdPoint> xs;
        for (int i = 0; i < 6; ++i) {
            xs.push_back(oracles::random_spd(2, 1e-6, rng));
        }
        const auto run = approx_horo_center(xs, {});
        CHECK(run.result.max_violation <= 1e-7);
        CHECK(max_abs_diff(run.result.point.matrix(), SymMatrix::identity(2)) <= 1e-5);
    }

    TEST_CASE("random PD(2) instance satisfies its constraints and the depth audit")
    {
        oracles::Rng rng(63);
        std::vector<SpdPoint> xs;
        for (int i = 0; i < 12; ++i) {
            xs.push_back(oracles::random_spd(2, 0.6, rng));
        }
        CenterOptions opt;
        opt.epsilon = 0.3;
        opt.threads = 4;
        const auto run = approx_horo_center(xs, opt);
        CHECK(run.result.max_violation <= 1e-7);
        CHECK(run.result.constraints_count == run.constraints.constraints.size());
        CHECK(run.result.grid_size == run.constraints.grid_size);
        const auto back = translate_to_identity(run.origin_shift, run.result.point);
        CHECK(max_violation(run.constraints, back) <= 1e-7 + 1e-9);
        CHECK(run.result.objective == doctest::Approx(run.result.point.log_det()).epsilon(1e-12));
        const auto audit = oracles::random_horoball_depth(xs, run.result.point, 2000, opt.epsilon, 7);
        CHECK(audit.violations == 0);
    }

    TEST_CASE("collinear data without a center point still has an approximate one")
    {
        const double half = 1.0;
        const auto xs = oracles::no_center_dataset(9, half);
        CenterOptions opt;
        opt.epsilon = 0.2;
        const auto run = approx_horo_center(xs, opt);
        CHECK(run.result.max_violation <= 1e-7);
        CHECK(dist_to_segment(run.result.point, half) <= opt.epsilon);
    }

    TEST_CASE("runs are deterministic")
    {
        oracles::Rng rng(64);
        std::vector<SpdPoint> xs;
        for (int i = 0; i < 8; ++i) {
            xs.push_back(oracles::random_spd(2, 0.5, rng));
        }
        CenterOptions opt;
        opt.epsilon = 0.4;
        opt.threads = 3;
        const auto a = approx_horo_center(xs, opt);
        opt.threads = 1;
        const auto b = approx_horo_center(xs, opt);
        CHECK(a.result.point.matrix() == b.result.point.matrix());
        CHECK(a.result.iterations == b.result.iterations);
    }

    TEST_CASE("input limits")
    {
        const std::vector<SpdPoint> two{SpdPoint::identity(2), diag({2, 1})};
        CHECK_THROWS_AS(approx_horo_center(two, {}), DomainError);
        CHECK_THROWS_AS(approx_horo_center(std::vector<SpdPoint>{}, {}), DomainError);
        std::vector<SpdPoint> many(default_point_cap(2) + 1, SpdPoint::identity(2));
        CHECK_THROWS_AS(approx_horo_center(many, {}), ResourceError);
        CHECK(default_point_cap(2) == 40);
        CHECK(default_point_cap(3) == 25);
        CHECK(default_point_cap(5) == 15);
        std::vector<SpdPoint> three(3, SpdPoint::identity(2));
        CenterOptions bad;
        bad.epsilon = -1.0;
        CHECK_THROWS_AS(approx_horo_center(three, bad), DomainError);
    }
}
