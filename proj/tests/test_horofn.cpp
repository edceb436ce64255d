#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pdgeo/dirgrid.hpp"
#include "pdgeo/error.hpp"
#include "pdgeo/horofn.hpp"
#include "pdgeo/oracles.hpp"

using namespace pdgeo;
using testutil::diag;
using testutil::spd;

namespace {

// Limit-definition values at high precision: tests/oracle/derive.py
constexpr double kBusRot2P2 = -0.6033916418622594;
constexpr double kBusRot2P2Minus = 0.61770580856343342;
constexpr double kBusRot3P3 = -0.31387522765242626;
constexpr double kBusRot3Q3Minus = -0.17537631274738669;

const double kInvSqrt2 = 1 / std::sqrt(2.0);

Horofunction diag_h(const Vector& a, Orientation o = Orientation::Plus)
{
    return Horofunction(Flat::identity(a.size()), a, o);
}

SymMatrix unit_tangent_at(const SpdPoint& p, oracles::Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = p.dim();
    SymMatrix e(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            e(i, j) = normal(rng);
        }
    }
    const SymMatrix v = congruence(p.sqrt().dense(), e);
    return (1.0 / tangent_norm(p, v)) * v;
}

double directional_derivative(const Horofunction& h, const SpdPoint& p, const SymMatrix& v)
{
    const double step = 1e-5;
    const double plus = busemann(h, exp_at(p, step * v));
    const double minus = busemann(h, exp_at(p, -step * v));
    return (plus - minus) / (2 * step);
}

}  // namespace

TEST_SUITE("horofn")
{
    TEST_CASE("flats and directions are validated")
    {
        CHECK_THROWS_AS(Flat(Matrix{{1, 0}, {0, -1}}), DomainError);
        CHECK_THROWS_AS(Flat(Matrix{{1, 0.1}, {0, 1}}), DomainError);
        CHECK_THROWS_AS(diag_h({1, 1}), DomainError);
        CHECK_THROWS_AS(diag_h({kInvSqrt2, kInvSqrt2}), DomainError);
        CHECK_THROWS_AS(diag_h({-kInvSqrt2, kInvSqrt2}), DomainError);
        CHECK_THROWS_AS(diag_h({1, 0, 0}), DomainError);
        CHECK_THROWS_AS(Horofunction::from_tangent(SymMatrix::identity(2)), DomainError);
        CHECK_NOTHROW(diag_h({kInvSqrt2, -kInvSqrt2}));
    }

    TEST_CASE("from_tangent recovers flat and direction")
    {
        oracles::Rng rng(21);
        for (int k = 0; k < 50; ++k) {
            const auto h = oracles::random_horofunction(3, rng);
            const auto g = Horofunction::from_tangent(h.tangent());
            const auto p = oracles::random_spd(3, 2.0, rng);
            CHECK(busemann(g, p) == doctest::Approx(busemann(h, p)).epsilon(1e-10));
        }
    }

    TEST_CASE("horospherical projection")
    {
        const auto d = horo_project(diag({3, 2, 0.5}), Flat::identity(3));
        CHECK(max_abs_diff(d.unipotent, Matrix::identity(3)) == 0.0);
        CHECK(d.flat_part == Vector{3, 2, 0.5});

        const auto e = horo_project(spd({{2, 1}, {1, 1}}), Flat::identity(2));
        CHECK(e.flat_part[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(e.flat_part[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(max_abs_diff(e.unipotent, Matrix{{1, 1}, {0, 1}}) < 1e-15);
    }

    TEST_CASE("horospherical projection reconstructs the rotated point")
    {
        oracles::Rng rng(22);
        for (std::size_t n : {2u, 3u, 4u}) {
            for (int k = 0; k < 50; ++k) {
                const auto p = oracles::random_spd(n, 3.0, rng);
                const Flat flat(oracles::random_rotation(n, rng));
                const auto dec = horo_project(p, flat);
                const Matrix f = Matrix::diagonal(dec.flat_part);
                const Matrix back = dec.unipotent * f * dec.unipotent.transposed();
                const Matrix& q = flat.rotation();
                const Matrix rotated = q.transposed() * p.matrix().dense() * q;
                double scale = 0.0;
                for (double v : p.eig().values) {
                    scale = std::max(scale, v);
                }
                CHECK(max_abs_diff(back, rotated) <= 1e-9 * scale);
                for (std::size_t i = 0; i < n; ++i) {
                    CHECK(dec.flat_part[i] > 0.0);
                    CHECK(dec.unipotent(i, i) == 1.0);
                    for (std::size_t j = 0; j < i; ++j) {
                        CHECK(dec.unipotent(i, j) == 0.0);
                    }
                }
            }
        }
    }

    TEST_CASE("Busemann values on fixed inputs")
    {
        CHECK(busemann(diag_h({0.8, 0.6}), SpdPoint::identity(2)) == 0.0);
        CHECK(busemann(diag_h({0.8, 0.6}, Orientation::Minus), SpdPoint::identity(2)) == 0.0);
        oracles::Rng rng(23);
        for (int k = 0; k < 10; ++k) {
            // A generic flat rotates I only up to rounding.
            const auto h = oracles::random_horofunction(3, rng, k % 2 ? Orientation::Minus : Orientation::Plus);
            CHECK(std::abs(busemann(h, SpdPoint::identity(3))) < 1e-15);
        }
        CHECK(busemann(diag_h({kInvSqrt2, -kInvSqrt2}), diag({std::exp(std::sqrt(2.0)), 1})) ==
              doctest::Approx(-1.0).epsilon(1e-15));
        const double s5 = std::sqrt(5.0);
        CHECK(busemann(diag_h({2 / s5, 1 / s5}), diag({std::numbers::e, 1})) ==
              doctest::Approx(-2 / s5).epsilon(1e-15));
    }

    TEST_CASE("Busemann values agree with the high-precision limit")
    {
        const Flat f2(givens_matrix(2, 0, 1, 0.3));
        const Vector a2{std::cos(0.2), -std::sin(0.2)};
        const auto p2 = spd({{1.5, 0.4}, {0.4, 0.7}});
        CHECK(busemann(Horofunction(f2, a2), p2) == doctest::Approx(kBusRot2P2).epsilon(1e-13));
        CHECK(busemann(Horofunction(f2, a2, Orientation::Minus), p2) ==
              doctest::Approx(kBusRot2P2Minus).epsilon(1e-13));

        const Flat f3(givens_matrix(3, 0, 1, 0.4) * givens_matrix(3, 0, 2, -0.7) * givens_matrix(3, 1, 2, 1.1));
        const double s14 = std::sqrt(14.0);
        const Vector a3{3 / s14, 1 / s14, -2 / s14};
        const auto p3 = spd({{2, 0.5, 0.1}, {0.5, 1.5, 0.3}, {0.1, 0.3, 1}});
        const auto q3 = spd({{1, -0.2, 0}, {-0.2, 3, 0.4}, {0, 0.4, 0.5}});
        CHECK(busemann(Horofunction(f3, a3), p3) == doctest::Approx(kBusRot3P3).epsilon(1e-13));
        CHECK(busemann(Horofunction(f3, a3, Orientation::Minus), q3) ==
              doctest::Approx(kBusRot3Q3Minus).epsilon(1e-13));
    }

    TEST_CASE("within a flat the Busemann function is linear in log coordinates")
    {
        oracles::Rng rng(24);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            const auto h = oracles::random_horofunction(3, rng);
            const Vector y{u(rng), u(rng), u(rng)};
            const Vector ey{std::exp(y[0]), std::exp(y[1]), std::exp(y[2])};
            const auto p = SpdPoint::from_spectral(h.flat().rotation(), ey);
            CHECK(busemann(h, p) == doctest::Approx(-dot(h.direction(), y)).epsilon(1e-12));
            CHECK(busemann(h.opposite(), p) == doctest::Approx(dot(h.direction(), y)).epsilon(1e-12));
        }
    }

    TEST_CASE("Minus orientation is the Busemann function of the reversed ray")
    {
        oracles::Rng rng(25);
        for (int k = 0; k < 100; ++k) {
            const auto h = oracles::random_horofunction(3, rng, Orientation::Minus);
            const SymMatrix t = h.tangent();
            const auto plus = Horofunction::from_tangent(t);
            const auto p = oracles::random_spd(3, 2.0, rng);
            CHECK(busemann(h, p) == doctest::Approx(busemann(plus, p)).epsilon(1e-10));
            CHECK(max_abs_diff(h.opposite().tangent(), -1.0 * t) < 1e-15);
        }
    }

    TEST_CASE("rotated Busemann functions")
    {
        oracles::Rng rng(26);
        const auto h = oracles::random_horofunction(2, rng);
        const auto p = oracles::random_spd(2, 2.0, rng);
        CHECK(busemann_rotated(h, Matrix::identity(2), p) == busemann(h, p));

        // Q' of Q-angle θ/2 turns PD(2) about the scalar axis: det is kept.
        const auto dp = diag({3.0, 0.5});
        const Matrix r = givens_matrix(2, 0, 1, 0.35);
        const Matrix turned = r.transposed() * dp.matrix().dense() * r;
        CHECK(determinant(turned) == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(geodesic_anisotropy(SpdPoint(SymMatrix::from_dense(turned))) ==
              doctest::Approx(geodesic_anisotropy(dp)).epsilon(1e-12));

        for (std::size_t n : {2u, 3u}) {
            for (int k = 0; k < 100; ++k) {
                const auto g = oracles::random_horofunction(n, rng, k % 2 ? Orientation::Minus : Orientation::Plus);
                const Matrix qp = oracles::random_rotation(n, rng);
                const auto x = oracles::random_spd(n, 2.0, rng);
                const auto composed = rotate_horofunction(g, qp);
                CHECK(max_abs_diff(composed.flat().rotation(), qp * g.flat().rotation()) < 1e-14);
                CHECK(busemann_rotated(g, qp, x) == doctest::Approx(busemann(composed, x)).epsilon(1e-10));
            }
        }
    }

    TEST_CASE("horoextent on fixed inputs")
    {
        const auto h = diag_h({kInvSqrt2, -kInvSqrt2});
        const std::vector<SpdPoint> one{SpdPoint::identity(2)};
        CHECK(horoextent(h, one) == 0.0);
        const std::vector<SpdPoint> two{diag({std::numbers::e, 1}), diag({1 / std::numbers::e, 1})};
        CHECK(horoextent(h, two) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(horoextent(h.opposite(), two) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK_THROWS_AS(horoextent(h, std::vector<SpdPoint>{}), DomainError);
    }

    TEST_CASE("horoextent is invariant under translating the configuration")
    {
        oracles::Rng rng(27);
        for (int k = 0; k < 50; ++k) {
            const auto q = oracles::random_spd(3, 1.5, rng);
            std::vector<SpdPoint> x;
            std::vector<SpdPoint> moved;
            for (int i = 0; i < 6; ++i) {
                x.push_back(oracles::random_spd(3, 2.0, rng));
                moved.push_back(translate_to_identity(q, x.back()));
            }
            const auto h = oracles::random_horofunction(3, rng);
            // The ray through I becomes the ray through q after translating back.
            const Geodesic through_q(q, congruence(q.sqrt().dense(), h.tangent()));
            CHECK(horoextent(through_q, x) == doctest::Approx(horoextent(h, moved)).epsilon(1e-9));
        }
    }

    TEST_CASE("Busemann along a geodesic vanishes at its base")
    {
        oracles::Rng rng(28);
        for (int k = 0; k < 20; ++k) {
            const auto q = oracles::random_spd(3, 2.0, rng);
            const Geodesic c(q, spd_log(oracles::random_spd(3, 2.0, rng)));
            CHECK(std::abs(busemann_along(c, q)) < 1e-12);
            CHECK(std::abs(busemann_along(c, q, Orientation::Minus)) < 1e-12);
            // Moving along the ray lowers the Plus value at unit rate.
            CHECK(busemann_along(c, geodesic_point(c, 1.5)) == doctest::Approx(-1.5).epsilon(1e-9));
        }
    }

    TEST_CASE("gradient has unit norm")
    {
        oracles::Rng rng(29);
        for (std::size_t n : {2u, 3u}) {
            for (int k = 0; k < 20; ++k) {
                const auto h = oracles::random_horofunction(n, rng);
                const auto p = oracles::random_spd(n, 2.0, rng);
                const auto v = descent_direction(h, p);
                CHECK(tangent_norm(p, v) == doctest::Approx(1.0).epsilon(1e-10));
                CHECK(directional_derivative(h, p, v) == doctest::Approx(-1.0).epsilon(1e-6));
                for (int j = 0; j < 20; ++j) {
                    CHECK(std::abs(directional_derivative(h, p, unit_tangent_at(p, rng))) <= 1 + 1e-6);
                }
            }
        }
    }

    TEST_CASE("the descent flow lowers b by exactly the step")
    {
        oracles::Rng rng(30);
        std::uniform_real_distribution<double> us(0.0, 5.0);
        for (int k = 0; k < 100; ++k) {
            const auto h = oracles::random_horofunction(3, rng, k % 2 ? Orientation::Minus : Orientation::Plus);
            const auto p = oracles::random_spd(3, 2.0, rng);
            const double s = us(rng);
            const auto q = horo_flow(h, p, s);
            CHECK(busemann(h, q) == doctest::Approx(busemann(h, p) - s).epsilon(1e-9));
            CHECK(metric_dist(p, q) == doctest::Approx(s).epsilon(1e-8));
        }
    }

    TEST_CASE("convexity along geodesics and the Lipschitz property")
    {
        oracles::Rng rng(31);
        for (std::size_t n : {2u, 3u}) {
            for (int k = 0; k < 100; ++k) {
                const auto h = oracles::random_horofunction(n, rng);
                const auto p = oracles::random_spd(n, 3.0, rng);
                const auto q = oracles::random_spd(n, 3.0, rng);
                const double bp = busemann(h, p);
                const double bq = busemann(h, q);
                for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    const double bt = busemann(h, geodesic_interpolate(p, q, t));
                    CHECK(bt <= (1 - t) * bp + t * bq + 1e-9);
                }
                CHECK(std::abs(bp - bq) <= metric_dist(p, q) + 1e-9);
            }
        }
    }

    TEST_CASE("horoballs are convex")
    {
        oracles::Rng rng(32);
        std::size_t checked = 0;
        for (int k = 0; k < 200; ++k) {
            const auto h = oracles::random_horofunction(3, rng);
            const auto p = oracles::random_spd(3, 2.0, rng);
            const auto q = oracles::random_spd(3, 2.0, rng);
            const Horoball ball{h, std::max(busemann(h, p), busemann(h, q))};
            REQUIRE(ball.contains(p));
            REQUIRE(ball.contains(q));
            CHECK(ball.contains(geodesic_interpolate(p, q, 0.5), 1e-9));
            ++checked;
        }
        CHECK(checked == 200);
    }
}
