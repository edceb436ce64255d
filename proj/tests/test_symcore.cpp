#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pdgeo/error.hpp"
#include "pdgeo/oracles.hpp"
#include "pdgeo/symcore.hpp"

using namespace pdgeo;
using testutil::diag;
using testutil::spd;

namespace {

// High-precision reference values: tests/oracle/derive.py
constexpr double kDistExample = 1.3610725787472008;
constexpr double kDistP3Q3 = 1.3811036798331857;
constexpr double kGaP3 = 0.72946129213182684;
constexpr double kLogP3[9] = {0.65348625900568959,  0.29371427090526204, 0.034857554384888337,
                              0.29371427090526204,  0.33182110536023555, 0.24432707685562501,
                              0.034857554384888337, 0.24432707685562501, -0.035581856405532687};

SpdPoint p3()
{
    return spd({{2, 0.5, 0.1}, {0.5, 1.5, 0.3}, {0.1, 0.3, 1}});
}

SpdPoint q3()
{
    return spd({{1, -0.2, 0}, {-0.2, 3, 0.4}, {0, 0.4, 0.5}});
}

Matrix reconstruct(const SymEig& e)
{
    const std::size_t n = e.values.size();
    Matrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = e.values[i];
    }
    return e.rotation * d * e.rotation.transposed();
}

}  // namespace

TEST_SUITE("symcore")
{
    TEST_CASE("eigensolver on small fixed inputs")
    {
        const auto e_id = sym_eig(SymMatrix::identity(3));
        CHECK(max_abs_diff(e_id.rotation, Matrix::identity(3)) < 1e-15);
        for (double v : e_id.values) {
            CHECK(v == 1.0);
        }

        const auto e_diag = sym_eig(SymMatrix::diagonal(std::vector<double>{3, 1}));
        CHECK(e_diag.values[0] == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(e_diag.values[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(max_abs_diff(e_diag.rotation, Matrix::identity(2)) < 1e-15);

        const auto e = sym_eig(SymMatrix::from_dense(Matrix{{2, 1}, {1, 1}}));
        CHECK(e.values[0] == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-14));
        CHECK(e.values[1] == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-14));
    }

    TEST_CASE("eigensolver: reconstruction, orientation and ordering")
    {
        oracles::Rng rng(11);
        for (std::size_t n : {2u, 3u, 4u, 5u}) {
            for (int k = 0; k < 50; ++k) {
                const auto p = oracles::random_spd(n, 3.0, rng);
                const auto e = sym_eig(p.matrix());
                const Matrix back = reconstruct(e);
                double scale = 0.0;
                for (double v : e.values) {
                    scale = std::max(scale, std::abs(v));
                }
                CHECK(max_abs_diff(back, p.matrix().dense()) <= 1e-10 * scale);
                CHECK(determinant(e.rotation) == doctest::Approx(1.0).epsilon(1e-12));
                const Matrix qtq = e.rotation.transposed() * e.rotation;
                CHECK(max_abs_diff(qtq, Matrix::identity(n)) < 1e-12);
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    CHECK(e.values[i] >= e.values[i + 1]);
                }
            }
        }
    }

    TEST_CASE("eigensolver keeps relative accuracy on graded input")
    {
        // Small eigenvalue of a strongly graded SPD matrix: computed from the
        // determinant, which is exact here.
        const SymMatrix m = SymMatrix::from_dense(Matrix{{1e12, 1e5}, {1e5, 1.0}});
        const auto e = sym_eig(m);
        const double det = 1e12 - 1e10;
        CHECK(e.values[0] * e.values[1] == doctest::Approx(det).epsilon(1e-12));
    }

    TEST_CASE("points reject non-SPD and non-finite input")
    {
        CHECK_THROWS_AS(SpdPoint(SymMatrix::from_dense(Matrix{{1, 2}, {2, 1}})), DomainError);
        CHECK_THROWS_AS(SpdPoint(SymMatrix::from_dense(Matrix{{0, 0}, {0, 1}})), DomainError);
        CHECK_THROWS_AS(SpdPoint(SymMatrix::from_dense(Matrix{{NAN, 0}, {0, 1}})), DomainError);
        CHECK_THROWS_AS(SymMatrix::from_dense_checked(Matrix{{1, 0.5}, {0.4, 1}}, 1e-8), DomainError);
        CHECK_NOTHROW(SpdPoint(SymMatrix::from_dense(Matrix{{2, 1}, {1, 1}})));
    }

    TEST_CASE("log and exp")
    {
        const auto l_id = spd_log(SpdPoint::identity(3));
        CHECK(l_id.frobenius_norm() == 0.0);

        const double e = std::numbers::e;
        const auto l = spd_log(diag({e, 1 / e}));
        CHECK(l(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(l(1, 1) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(std::abs(l(0, 1)) < 1e-16);

        const auto lp = spd_log(p3());
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(lp(i, j) == doctest::Approx(kLogP3[3 * i + j]).epsilon(1e-13));
            }
        }
    }

    TEST_CASE("log/exp round trips")
    {
        oracles::Rng rng(12);
        for (std::size_t n : {2u, 3u, 4u}) {
            for (int k = 0; k < 50; ++k) {
                const auto p = oracles::random_spd(n, 3.0, rng);
                const auto back = spd_exp(spd_log(p));
                double scale = 0.0;
                for (double v : p.eig().values) {
                    scale = std::max(scale, v);
                }
                CHECK(max_abs_diff(back.matrix(), p.matrix()) <= 1e-10 * scale);
                const auto s = spd_log(p);
                CHECK(max_abs_diff(spd_log(spd_exp(s)), s) <= 1e-10);
            }
        }
    }

    TEST_CASE("distance on fixed inputs")
    {
        CHECK(metric_dist(SpdPoint::identity(2), SpdPoint::identity(2)) == 0.0);
        CHECK(metric_dist(diag({std::exp(2.0), 1}), SpdPoint::identity(2)) == doctest::Approx(2.0).epsilon(1e-15));
        const double l1 = std::log((3 + std::sqrt(5.0)) / 2);
        const double l2 = std::log((3 - std::sqrt(5.0)) / 2);
        const double by_hand = std::sqrt(l1 * l1 + l2 * l2);
        const double d = metric_dist(spd({{2, 1}, {1, 1}}), SpdPoint::identity(2));
        CHECK(d == doctest::Approx(by_hand).epsilon(1e-14));
        CHECK(d == doctest::Approx(kDistExample).epsilon(1e-14));
        CHECK(metric_dist(p3(), q3()) == doctest::Approx(kDistP3Q3).epsilon(1e-14));
    }

    TEST_CASE("distance rejects dimension mismatch")
    {
        CHECK_THROWS_AS(metric_dist(SpdPoint::identity(2), SpdPoint::identity(3)), DomainError);
    }

    TEST_CASE("distance: symmetry and triangle inequality")
    {
        oracles::Rng rng(13);
        for (std::size_t n : {2u, 3u}) {
            for (int k = 0; k < 100; ++k) {
                const auto a = oracles::random_spd(n, 3.0, rng);
                const auto b = oracles::random_spd(n, 3.0, rng);
                const auto c = oracles::random_spd(n, 3.0, rng);
                CHECK(metric_dist(a, b) == doctest::Approx(metric_dist(b, a)).epsilon(1e-10));
                CHECK(metric_dist(a, c) <= metric_dist(a, b) + metric_dist(b, c) + 1e-10);
            }
        }
    }

    TEST_CASE("geodesic points")
    {
        SymMatrix a(2);
        a(0, 0) = 1 / std::sqrt(2.0);
        a(1, 1) = -1 / std::sqrt(2.0);
        const Geodesic c(SpdPoint::identity(2), a);
        const auto p = geodesic_point(c, std::sqrt(2.0));
        CHECK(p(0, 0) == doctest::Approx(std::numbers::e).epsilon(1e-14));
        CHECK(p(1, 1) == doctest::Approx(1 / std::numbers::e).epsilon(1e-14));
        CHECK(std::abs(p(0, 1)) < 1e-15);

        const auto base = p3();
        const Geodesic c3(base, spd_log(q3()));
        CHECK(max_abs_diff(geodesic_point(c3, 0.0).matrix(), base.matrix()) < 1e-14);

        CHECK_THROWS_AS(Geodesic(SpdPoint::identity(2), SymMatrix(2)), DomainError);
    }

    TEST_CASE("geodesics have unit speed")
    {
        oracles::Rng rng(14);
        std::uniform_real_distribution<double> ut(-5.0, 5.0);
        for (std::size_t n : {2u, 3u}) {
            for (int k = 0; k < 100; ++k) {
                const auto q = oracles::random_spd(n, 2.0, rng);
                const auto w = spd_log(oracles::random_spd(n, 2.0, rng));
                if (w.frobenius_norm() < 1e-6) {
                    continue;
                }
                const Geodesic c(q, w);
                const double s = ut(rng);
                const double t = ut(rng);
                CHECK(metric_dist(geodesic_point(c, 0.0), geodesic_point(c, t)) ==
                      doctest::Approx(std::abs(t)).epsilon(1e-8));
                CHECK(metric_dist(geodesic_point(c, s), geodesic_point(c, t)) ==
                      doctest::Approx(std::abs(s - t)).epsilon(1e-8));
            }
        }
        // Far along the ray the spectral form stays exact.
        SymMatrix a(3);
        a(0, 0) = 0.8;
        a(1, 1) = 0.6;
        const Geodesic far(SpdPoint::identity(3), a);
        CHECK(metric_dist(geodesic_point(far, 40.0), SpdPoint::identity(3)) == doctest::Approx(40.0).epsilon(1e-12));
    }

    TEST_CASE("geodesic midpoint")
    {
        oracles::Rng rng(15);
        for (int k = 0; k < 100; ++k) {
            const auto p = oracles::random_spd(3, 3.0, rng);
            const auto q = oracles::random_spd(3, 3.0, rng);
            const auto m = geodesic_interpolate(p, q, 0.5);
            const double d = metric_dist(p, q);
            CHECK(metric_dist(p, m) == doctest::Approx(d / 2).epsilon(1e-9));
            CHECK(metric_dist(m, q) == doctest::Approx(d / 2).epsilon(1e-9));
        }
    }

    TEST_CASE("log_at and exp_at are inverse")
    {
        oracles::Rng rng(16);
        for (int k = 0; k < 50; ++k) {
            const auto p = oracles::random_spd(3, 2.0, rng);
            const auto q = oracles::random_spd(3, 2.0, rng);
            const auto v = log_at(p, q);
            CHECK(tangent_norm(p, v) == doctest::Approx(metric_dist(p, q)).epsilon(1e-10));
            CHECK(max_abs_diff(exp_at(p, v).matrix(), q.matrix()) < 1e-9);
        }
    }

    TEST_CASE("translation to the identity")
    {
        const auto q = p3();
        CHECK(max_abs_diff(translate_to_identity(q, q).matrix(), SymMatrix::identity(3)) < 1e-14);
        CHECK(max_abs_diff(translate_to_identity(SpdPoint::identity(3), q).matrix(), q.matrix()) < 1e-15);

        oracles::Rng rng(17);
        for (int k = 0; k < 100; ++k) {
            const auto base = oracles::random_spd(3, 2.0, rng);
            const auto a = oracles::random_spd(3, 2.0, rng);
            const auto b = oracles::random_spd(3, 2.0, rng);
            const auto ta = translate_to_identity(base, a);
            const auto tb = translate_to_identity(base, b);
            CHECK(metric_dist(ta, tb) == doctest::Approx(metric_dist(a, b)).epsilon(1e-10));
            CHECK(max_abs_diff(translate_from_identity(base, ta).matrix(), a.matrix()) < 1e-9);
        }
    }

    TEST_CASE("the GL action is an isometry")
    {
        oracles::Rng rng(18);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            Matrix g(3);
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) {
                    g(i, j) = normal(rng);
                }
            }
            if (std::abs(determinant(g)) < 0.1) {
                continue;
            }
            const auto a = oracles::random_spd(3, 2.0, rng);
            const auto b = oracles::random_spd(3, 2.0, rng);
            CHECK(metric_dist(act(g, a), act(g, b)) == doctest::Approx(metric_dist(a, b)).epsilon(1e-9));
        }
    }

    TEST_CASE("unit determinant PD(2) distance law")
    {
        oracles::Rng rng(19);
        for (int k = 0; k < 200; ++k) {
            auto p = oracles::random_spd(2, 3.0, rng);
            const double s = std::exp(-p.log_det() / 2);
            p = SpdPoint(s * p.matrix());
            const double law = std::sqrt(2.0) * std::acosh((p(0, 0) + p(1, 1)) / 2);
            CHECK(std::abs(metric_dist(p, SpdPoint::identity(2)) - law) <= 1e-9);
        }
    }

    TEST_CASE("geodesic anisotropy")
    {
        CHECK(geodesic_anisotropy(SpdPoint::identity(3)) == 0.0);
        const double e = std::numbers::e;
        CHECK(geodesic_anisotropy(diag({e, 1 / e})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(geodesic_anisotropy(p3()) == doctest::Approx(kGaP3).epsilon(1e-13));

        oracles::Rng rng(20);
        std::uniform_real_distribution<double> alpha(0.01, 100.0);
        for (int k = 0; k < 100; ++k) {
            const auto p = oracles::random_spd(3, 3.0, rng);
            const double s = alpha(rng);
            CHECK(geodesic_anisotropy(SpdPoint(s * p.matrix())) ==
                  doctest::Approx(geodesic_anisotropy(p)).epsilon(1e-10));
        }
    }
}
