#include <doctest.h>

#include "yma/gauge.hpp"
#include "yma/rng.hpp"

using namespace yma;

namespace {

double curv_dist(const Curv& a, const Curv& b) { return std::sqrt(flat_norm2(a - b)); }
double form_dist(const Form1& a, const Form1& b) { return std::sqrt(flat_norm2(a - b)); }

} // namespace

TEST_CASE("adhm potential")
{
    Quat xi(0.3, -0.1, 0.2, 0.5);
    Form1 g = adhm_potential(xi, 1.3, xi);
    CHECK(flat_norm2(g) == 0.0);
    Form1 h = adhm_potential(Quat(0.0), 1.0, Quat(1.0));
    CHECK(norm(h[0]) < 1e-16);
    CHECK(norm(h[1] - ImQ{0.5, 0, 0}) < 1e-16);
    CHECK(norm(h[2] - ImQ{0, 0.5, 0}) < 1e-16);
    CHECK(norm(h[3] - ImQ{0, 0, 0.5}) < 1e-16);
    Rng rng(31);
    for (int n = 0; n < 1000; ++n) {
        Quat x = rng.quat(0.5), z = rng.quat(2.0);
        double l = rng.uniform(0.3, 3);
        Form1 a = adhm_potential(x, l, z);
        double bound = norm(z - x) / (norm2(z - x) + l * l);
        for (int i = 0; i < 4; ++i) CHECK(norm(a[i]) <= bound * (1 + 1e-14));
    }
}

TEST_CASE("adhm curvature closed form")
{
    Curv F = adhm_curvature(Quat(0.0), 1.0, Quat(0.0));
    CHECK(norm(F(0, 1) - ImQ{2, 0, 0}) < 1e-15);
    CHECK(norm(F(2, 3) - ImQ{-2, 0, 0}) < 1e-15);
    CHECK(norm(F(0, 2) - ImQ{0, 2, 0}) < 1e-15);
    CHECK(norm(F(1, 3) - ImQ{0, 2, 0}) < 1e-15);
    CHECK(norm(F(0, 3) - ImQ{0, 0, 2}) < 1e-15);
    CHECK(norm(F(1, 2) - ImQ{0, 0, -2}) < 1e-15);
    CHECK(flat_norm2(F) == doctest::Approx(48.0));
    Rng rng(32);
    for (int n = 0; n < 1000; ++n) {
        Quat z = rng.quat(1.5);
        CHECK(std::fabs(norm2_g(adhm_curvature(Quat(0.0), 1.0, z), z) - 3.0) < 1e-12);
        Quat x = rng.quat(0.5);
        double l = rng.uniform(0.3, 3);
        double d = norm2(z - x) + l * l;
        CHECK(std::fabs(flat_norm2(adhm_curvature(x, l, z)) - 48 * l * l * l * l / (d * d * d * d)) <=
              1e-12 * 48 * l * l * l * l / (d * d * d * d));
    }
}

TEST_CASE("finite-difference curvature")
{
    auto c = ConnectionModel::basic();
    Quat z(0.3, -0.5, 0.2, 0.4);
    Curv ex = c->curvature(z);
    double e1 = curv_dist(curvature_fd(*c, z, 1e-2), ex);
    double e2 = curv_dist(curvature_fd(*c, z, 5e-3), ex);
    CHECK(std::log(e1 / e2) / std::log(2.0) >= 1.9);

    Rng rng(33);
    for (int n = 0; n < 20; ++n) {
        Quat x = rng.quat(0.5), w = rng.quat();
        double l = rng.uniform(0.5, 2);
        auto a = ConnectionModel::adhm(x, l);
        CHECK(curv_dist(curvature_fd(*a, w, 1e-3, 4), a->curvature(w)) < 1e-8);
    }
    auto flat = ConnectionModel::flat();
    CHECK(flat_norm2(curvature_fd(*flat, z, 1e-2)) == 0.0);

    auto L = std::make_shared<Lattice4D>(1.0, 5, 2);
    Form1 g{ImQ{0.3, 0, 0.1}, ImQ{0, -0.2, 0.5}, ImQ{1, 0, 0}, ImQ{0.2, 0.2, 0.2}};
    auto cl = ConnectionModel::lattice(L, std::vector<Form1>(L->size(), g));
    Curv Fc = cl->curvature(Quat(0.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(norm(Fc(i, j) - bracket(g[i], g[j])) < 1e-14);
    CHECK_THROWS_AS(cl->curvature(L->coord(L->size() - 1)), StencilOutOfDomain);
}

TEST_CASE("gauge action")
{
    auto c = ConnectionModel::adhm(Quat(0.1, 0, -0.2, 0), 1.2);
    Quat z(0.4, 0.3, -0.1, 0.2);
    auto same = gauge_act(GaugeTransform::identity(), c);
    CHECK(form_dist(same->potential(z), c->potential(z)) < 1e-15);
    CHECK(curv_dist(same->curvature(z), c->curvature(z)) < 1e-15);

    Rng rng(34);
    auto cq = gauge_act(GaugeTransform::constant(rng.unit_quat()), c);
    for (int n = 0; n < 100; ++n) {
        Quat w = rng.quat();
        CHECK(std::fabs(flat_norm2(cq->curvature(w)) - flat_norm2(c->curvature(w))) < 1e-12);
    }

    auto t = GaugeTransform::bump(Quat(0.2, 0, 0, 0.1), 1.5, ImQ{0.8, -0.4, 0.3});
    for (int n = 0; n < 20; ++n) {
        Quat w = rng.quat(0.6);
        CHECK(std::fabs(norm2(t.value(w)) - 1.0) < 1e-12);
        // analytic gradient vs finite differences
        auto g = t.grad(w);
        for (int i = 0; i < 4; ++i) {
            Quat d = (t.value(w + 1e-5 * basis(i)) - t.value(w - 1e-5 * basis(i))) * (0.5e5);
            CHECK(norm(d - g[i]) < 1e-8);
        }
    }
    auto cg = gauge_act(t, c);
    for (int n = 0; n < 20; ++n) {
        Quat w = rng.quat(0.6);
        // conjugated curvature equals the curvature of the transformed potential, at fourth order
        double e1 = curv_dist(curvature_fd(*cg, w, 2e-3, 4), cg->curvature(w));
        double e2 = curv_dist(curvature_fd(*cg, w, 1e-3, 4), cg->curvature(w));
        CHECK(e2 < 1e-6);
        CHECK((e2 < 1e-11 || e1 / e2 > 12.0));
    }
}

TEST_CASE("conformal pullback")
{
    auto c = ConnectionModel::basic();
    Quat z(0.4, -0.3, 0.2, 0.6);
    auto same = pullback(ConformalMap::identity(), c);
    CHECK(form_dist(same->potential(z), c->potential(z)) < 1e-15);

    Rng rng(35);
    for (double l : {0.5, 2.0, 7.0}) {
        auto p = pullback(ConformalMap::dilation(l), c);
        for (int n = 0; n < 50; ++n) {
            Quat w = rng.quat();
            CHECK(std::fabs(norm2_g(p->curvature(w), w) - 3.0 / chi_lambda(w, l)) < 1e-11 / chi_lambda(w, l));
        }
    }
    // affine pullback of the basic connection is an ADHM connection
    Quat b = rng.quat(0.4);
    double l = 1.3;
    auto p = pullback(ConformalMap::affine(l, b), c);
    auto a = ConnectionModel::adhm(-1.0 / l * b, 1.0 / l);
    for (int n = 0; n < 50; ++n) {
        Quat w = rng.quat();
        CHECK(form_dist(p->potential(w), a->potential(w)) < 1e-13);
        CHECK(curv_dist(p->curvature(w), a->curvature(w)) < 1e-12);
    }
    ConformalMap m;
    m.lambda = 0.8;
    m.xi1 = rng.quat(0.3);
    m.p = rng.unit_quat();
    m.q = rng.unit_quat();
    auto pm = pullback(m, ConnectionModel::adhm(Quat(0.1, 0.2, 0, 0), 1.1));
    for (int n = 0; n < 20; ++n) {
        Quat w = rng.quat();
        CHECK(curv_dist(curvature_fd(*pm, w, 1e-3, 4), pm->curvature(w)) < 1e-8);
    }
    // rotation pullback of the basic connection is a constant gauge of it
    Quat pr = rng.unit_quat(), qr = rng.unit_quat();
    auto rot = pullback(ConformalMap::rotation(pr, qr), c);
    for (int n = 0; n < 20; ++n) {
        Quat w = rng.quat();
        CHECK(form_dist(conjugate_form(qr, rot->potential(w)), c->potential(w)) < 1e-13);
    }
}

TEST_CASE("radial ansatz")
{
    auto basic = ConnectionModel::basic();
    auto r = ConnectionModel::radial(RadialProfile::adhm(16, 1.0));
    Rng rng(36);
    for (int n = 0; n < 100; ++n) {
        Quat w = rng.quat();
        CHECK(curv_dist(r->curvature(w), basic->curvature(w)) < 1e-10);
        CHECK(form_dist(r->potential(w), basic->potential(w)) < 1e-12);
    }
    auto flat = ConnectionModel::flat();
    CHECK(flat_norm2(flat->curvature(Quat(0.3, 0.1, 0, 0))) == 0.0);

    auto prof2 = RadialProfile::adhm(48, 2.0);
    for (double s : {0.0, 0.3, 1.0, 5.0, 100.0}) {
        CHECK(std::fabs(prof2.f(s) - 1.0 / (s + 4)) < 1e-12);
        CHECK(std::fabs(prof2.df(s) + 1.0 / ((s + 4) * (s + 4))) < 1e-9);
    }

    auto f = [](double s) { return (1.0 + 0.3 * std::sin(s) * std::exp(-s)) / (1.0 + s); };
    auto g = ConnectionModel::radial(RadialProfile::from_function(40, f));
    for (int n = 0; n < 10; ++n) {
        Quat w = rng.quat(0.7);
        double e1 = curv_dist(curvature_fd(*g, w, 1e-2), g->curvature(w));
        double e2 = curv_dist(curvature_fd(*g, w, 5e-3), g->curvature(w));
        CHECK(e1 < 1e-3);
        CHECK(e1 / e2 > 3.5);
    }
}
