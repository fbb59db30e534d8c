#include <doctest.h>

#include "yma/gauge.hpp"
#include "yma/quadrature.hpp"
#include "yma/rng.hpp"
#include "yma/sphere.hpp"

using namespace yma;

TEST_CASE("round weight and chart volume")
{
    CHECK(round_weight(Quat(0.0)) == doctest::Approx(16.0));
    CHECK(round_weight(Quat(0, 0, 1, 0)) == doctest::Approx(1.0));
    auto g = RadialGrid::uniform(64);
    CHECK(std::fabs(g.volume() - kVolS4) / kVolS4 < 1e-12);
    // direct chart integral of the weight: 2 pi^2 int r^3 16 (1+r^2)^-4 dr
    double v = integrate_panels([](double r) { return 2 * M_PI * M_PI * r * r * r * round_weight(Quat(r)); },
                                {0, 0.5, 1, 2, 4, 8, 16, 64, 256, 4096}, 40);
    CHECK(std::fabs(v - kVolS4) / kVolS4 < 1e-9);
}

TEST_CASE("chi_lambda")
{
    Quat z(0.3, -0.2, 0.9, 0.1);
    CHECK(chi_lambda(z, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(chi_lambda(Quat(0.0), 2.0) == doctest::Approx(1.0 / 16));
    CHECK(chi_lambda(Quat(1e8, 0, 0, 0), 2.0) == doctest::Approx(16.0).epsilon(1e-12));
    Rng rng(21);
    for (int n = 0; n < 200; ++n) {
        Quat w = rng.quat();
        double l = std::exp(rng.uniform(-2, 2));
        CHECK(std::fabs(chi_lambda(l * w, 1.0 / l) * chi_lambda(w, l) - 1.0) < 1e-12);
        double c = chi_lambda(w, l);
        CHECK(c >= std::min(std::pow(l, -4), std::pow(l, 4)) * (1 - 1e-12));
        CHECK(c <= std::max(std::pow(l, -4), std::pow(l, 4)) * (1 + 1e-12));
    }
}

TEST_CASE("d chi / d log lambda")
{
    CHECK(dchi_dloglambda(Quat(0.0), 2.0) == doctest::Approx(-4.0 / 16));
    CHECK(std::fabs(dchi_dloglambda(Quat(0.5, 0, 0, 0), 2.0)) < 1e-15);
    Quat z(0.4, 0.1, -0.7, 0.2);
    double l = 1.7;
    double e1 = 1e-3, e2 = 5e-4;
    auto fd = [&](double d) { return (chi_lambda(z, l * std::exp(d)) - chi_lambda(z, l * std::exp(-d))) / (2 * d); };
    double ex = dchi_dloglambda(z, l);
    double err1 = std::fabs(fd(e1) - ex), err2 = std::fabs(fd(e2) - ex);
    CHECK(err1 < 1e-5);
    CHECK(err1 / err2 > 3.5); // second order
}

TEST_CASE("mu")
{
    CHECK(mu(Quat(0.0)) == doctest::Approx(-1.0));
    CHECK(mu(Quat(0, 1, 0, 0)) == doctest::Approx(0.0));
    double prev = -1;
    for (double r = 0.1; r < 1e4; r *= 1.5) {
        double m = mu(Quat(r));
        CHECK(m > prev);
        CHECK(m < 1.0);
        prev = m;
    }
}

TEST_CASE("conformal maps")
{
    Quat z(0.2, -0.4, 0.6, 1.1);
    CHECK(norm(ConformalMap::identity().apply(z) - z) < 1e-15);
    CHECK(norm(ConformalMap::dilation(3).apply(Quat(0, 1, 0, 0)) - Quat(0, 3, 0, 0)) < 1e-15);
    auto m = compose(ConformalMap::dilation(1.0 / 3), ConformalMap::dilation(3));
    CHECK(norm(m.apply(z) - z) < 1e-12);

    Rng rng(22);
    ConformalMap a;
    a.xi1 = rng.quat(0.3);
    a.xi2 = rng.quat(0.3);
    a.lambda = 1.4;
    a.p = rng.unit_quat();
    a.q = rng.unit_quat();
    ConformalMap b = ConformalMap::affine(0.7, rng.quat(0.5));
    b.p = rng.unit_quat();
    CHECK(norm(compose(a, b).apply(z) - a.apply(b.apply(z))) < 1e-12);
    CHECK(norm(a.inverse().apply(a.apply(z)) - z) < 1e-12);

    ConformalMap inv = a;
    inv.eps = 2;
    CHECK(norm(inv.inverse().apply(inv.apply(z)) - z) < 1e-12);
    CHECK_THROWS_AS(inv.apply(inv.xi1), PoleHit);

    for (const ConformalMap& mm : {a, inv}) {
        auto J = mm.jacobian(z);
        double h = 1e-5;
        for (int bb = 0; bb < 4; ++bb) {
            Quat d = (mm.apply(z + h * basis(bb)) - mm.apply(z - h * basis(bb))) * (0.5 / h);
            for (int aa = 0; aa < 4; ++aa) CHECK(std::fabs(J[aa][bb] - d[aa]) < 1e-8);
        }
    }
}

TEST_CASE("hodge star and splitting")
{
    Rng rng(23);
    Curv F;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) F.set(i, j, rng.imq());
    Curv SS = hodge_star(hodge_star(F));
    CHECK(flat_norm2(SS - F) < 1e-24);
    auto [Fp, Fm] = hodge_split(F);
    CHECK(flat_norm2(Fp + Fm - F) < 1e-24);
    CHECK(std::fabs(flat_dot(Fp, Fm)) < 1e-12);
    CHECK(std::fabs(flat_norm2(Fp) + flat_norm2(Fm) - flat_norm2(F)) < 1e-12);
    auto [Z1, Z2] = hodge_split(Curv{});
    CHECK(flat_norm2(Z1) == 0.0);
    CHECK(flat_norm2(Z2) == 0.0);
    for (int n = 0; n < 50; ++n) {
        Quat z = rng.quat();
        CHECK(flat_norm2(hodge_split(adhm_curvature(Quat(0.0), 1.0, z)).first) < 1e-20);
    }
}

TEST_CASE("lattice layout")
{
    Lattice4D L(3.0, 13, 2);
    CHECK(L.h() == doctest::Approx(0.5));
    std::size_t ball = 0;
    for (std::size_t n = 0; n < L.size(); ++n) {
        double r = norm(L.coord(n));
        CHECK(r <= 3.0 + 2 * L.h() + 1e-9);
        if (L.in_ball(n)) {
            ++ball;
            CHECK(r <= 3.0 + 1e-9);
        }
        CHECK(L.locate(L.coord(n)) == static_cast<std::int32_t>(n));
    }
    CHECK(ball == L.ball_size());
    auto c = L.locate(Quat(0.0));
    REQUIRE(c >= 0);
    auto nb = L.neighbor(c, 2, 1);
    CHECK(norm(L.coord(nb) - Quat(0, 0, 0.5, 0)) < 1e-12);
    CHECK(L.locate(Quat(0.25, 0, 0, 0)) == -1);
}
