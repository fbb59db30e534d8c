#include <doctest.h>

#include <memory>

#include "yma/energy.hpp"
#include "yma/variational.hpp"

using namespace yma;

namespace {

double sup_diff(const Lattice4D& L, const Field1& a, const Field1& b, double radius)
{
    double m = 0;
    for (auto n : L.ball_nodes())
        if (norm(L.coord(n)) <= radius) m = std::max(m, std::sqrt(flat_norm2(a[n] - b[n])));
    return m;
}

double sup_abs(const Lattice4D& L, const Field1& a, double radius)
{
    return sup_diff(L, a, Field1(a.size(), Form1{}), radius);
}

Field1 gaussian_form(const Lattice4D& L, const Quat& c, double w)
{
    Field1 Xi(L.size());
    for (std::size_t k = 0; k < L.size(); ++k) {
        Quat z = L.coord(k);
        double g = std::exp(-norm2(z - c) / (w * w));
        Xi[k] = {ImQ{g, 0, 0}, ImQ{0, 0.5 * g * z.w, 0}, ImQ{0, 0, -0.3 * g}, ImQ{0.2 * g * z.x, 0.2 * g, 0}};
    }
    return Xi;
}

} // namespace

TEST_CASE("discrete energy gradient matches finite differences")
{
    auto L = std::make_shared<Lattice4D>(1.5, 9, 4);
    Stencil S(L, 4);
    auto c = ConnectionModel::adhm(Quat(0.1, 0.2, 0.0, -0.1), 0.9);
    Field1 G = sample_potential(*c, *L);
    Field1 g = discrete_energy_gradient(S, G, 1.3, 2.0);
    Rng rng(5);
    for (int t = 0; t < 6; ++t) {
        auto n = L->ball_nodes()[static_cast<std::size_t>(rng.uniform() * L->ball_size())];
        int i = t % 4;
        double eps = 1e-5;
        Field1 Gp = G, Gm = G;
        Gp[n][i].y += eps;
        Gm[n][i].y -= eps;
        double fd = (discrete_energy(S, Gp, 1.3, 2.0) - discrete_energy(S, Gm, 1.3, 2.0)) / (2 * eps);
        double ad = g[n][i].y * L->weight(n) * inv_conformal(L->coord(n));
        CHECK(std::fabs(fd - ad) <= 1e-6 * std::max(1.0, std::fabs(ad)));
    }
}

TEST_CASE("lattice gradient")
{
    auto L = std::make_shared<Lattice4D>(2.0, 17, 6);
    Stencil S(L, 6);
    auto basic = ConnectionModel::basic();
    Rng rng(2);
    for (int t = 0; t < 3; ++t) {
        Field1 G = sample_potential(*basic, *L);
        Form1 v{rng.imq(0.2), rng.imq(0.2), rng.imq(0.2), rng.imq(0.2)};
        Field1 P = bump_form(*L, rng.quat(0.3), 1.2, v);
        for (std::size_t n = 0; n < L->size(); ++n) G[n] = G[n] + P[n];
        Form1 u{rng.imq(), rng.imq(), rng.imq(), rng.imq()};
        Field1 d = bump_form(*L, rng.quat(0.3), 1.0, u);
        auto gf = gradient_lattice(S, G, 1.3, 2.0);
        double eps = 1e-5;
        Field1 Gp = G, Gm = G;
        for (std::size_t n = 0; n < L->size(); ++n) {
            Gp[n] = G[n] + eps * d[n];
            Gm[n] = G[n] - eps * d[n];
        }
        double fd = (discrete_energy(S, Gp, 1.3, 2.0) - discrete_energy(S, Gm, 1.3, 2.0)) / (2 * eps);
        CHECK(std::fabs(l2_dot(*L, gf.total, d) - fd) <= 2e-2 * std::fabs(fd));
        CHECK(std::fabs(l2_dot(*L, discrete_energy_gradient(S, G, 1.3, 2.0), d) - fd) <= 1e-8 * std::fabs(fd));
    }
    // pointwise version against the lattice version
    Field1 G = sample_potential(*basic, *L);
    auto gf = gradient_lattice(S, G, 1.3, 2.0);
    for (int t = 0; t < 5; ++t) {
        auto n = L->ball_nodes()[static_cast<std::size_t>(rng.uniform() * L->ball_size())];
        auto gp = gradient_ym_alpha_lambda(*basic, 1.3, 2.0, L->coord(n));
        CHECK(std::sqrt(flat_norm2(gp.total - gf.total[n])) <= 0.1);
        Quat z = L->coord(n);
        double pre = 1.3 * std::pow(3.0 + chi_lambda(z, 2.0) * norm2_g(basic->curvature(z), z), 0.3);
        Form1 sum = gp.dstarF + gp.theta1 + gp.theta2;
        CHECK(std::sqrt(flat_norm2(gp.total - pre * sum)) < 1e-12);
    }
    auto g1 = gradient_ym_alpha_lambda(*basic, 1.0, 2.0, Quat(0.3, 0.1, -0.2, 0.4));
    CHECK(std::sqrt(flat_norm2(g1.theta1) + flat_norm2(g1.theta2)) == 0.0);
    // the basic connection is Yang-Mills and critical for the untwisted energy
    auto gp = gradient_ym_alpha_lambda(*basic, 1.3, 1.0, Quat(0.3, 0.1, -0.2, 0.4));
    CHECK(std::sqrt(flat_norm2(gp.total)) < 1e-9);
    auto pb = pullback(ConformalMap::dilation(2.0), basic);
    auto gq = gradient_ym_alpha_lambda(*pb, 1.3, 2.0, Quat(0.3, 0.1, -0.2, 0.4));
    CHECK(std::sqrt(flat_norm2(gq.total)) < 1e-8);
    // lattice D*F of the basic connection converges to zero
    double prev = 1e300;
    for (int n : {9, 13, 17}) {
        auto Ln = std::make_shared<Lattice4D>(1.0, n, 4);
        Stencil Sn(Ln, 4);
        double e = l2_norm(*Ln, dstar_F_lattice(Sn, sample_potential(*basic, *Ln)));
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("jacobi operator")
{
    auto basic = ConnectionModel::basic();
    double prev = 1e300;
    for (int n : {9, 17}) {
        auto L = std::make_shared<Lattice4D>(1.0, n, 4);
        Stencil S(L, 4);
        Field1 G = sample_potential(*basic, *L);
        Field2 F = sample_curvature(*basic, *L, S.depth(1));
        Field1 Xi = gaussian_form(*L, Quat(0.1, 0, 0, 0), 1.0);
        Field1 a = jacobi_apply(S, G, F, Xi), b = jacobi_bochner(S, G, F, Xi);
        double e = sup_diff(*L, a, b, L->R());
        CHECK(e < 2e-2 * sup_abs(*L, a, L->R()));
        CHECK(e < prev / 8);
        prev = e;
        CHECK(sup_abs(*L, jacobi_apply(S, G, F, Field1(L->size(), Form1{})), L->R()) == 0.0);
    }

    auto L = std::make_shared<Lattice4D>(2.0, 17, 6);
    Stencil S(L, 6);
    Field1 G = sample_potential(*basic, *L);
    Field2 F = sample_curvature(*basic, *L, S.depth(1));
    auto B = moduli_basis(L);
    auto gm = gram_matrix(B);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(std::fabs(gm[i][j] - (i == j ? 1.0 : 0.0)) < 1e-12);
    for (const auto& bb : B.b) {
        CHECK(l2_norm(*L, jacobi_apply(S, G, F, bb)) <= 0.1);
        CHECK(l2_norm(*L, dstar_1form(S, G, bb)) <= 1e-2);
    }
    Field1 p = kernel_project(B.b[2], B);
    CHECK(sup_diff(*L, p, B.b[2], L->R()) < 1e-12);
    Field1 Xi = gaussian_form(*L, Quat(0.3, 0.1, 0, 0), 0.8);
    Field1 pX = kernel_project(Xi, B);
    Field1 rest(Xi.size());
    for (std::size_t n = 0; n < Xi.size(); ++n) rest[n] = Xi[n] - pX[n];
    CHECK(l2_norm(*L, kernel_project(rest, B)) < 1e-10 * l2_norm(*L, Xi));
    CHECK(l2_norm(*L, pX) <= l2_norm(*L, Xi));
}

TEST_CASE("polarization identities")
{
    auto c1 = ConnectionModel::adhm(Quat(0.2, 0.1, 0.0, -0.1), 1.2);
    auto c2 = ConnectionModel::basic();
    double pf = 1e300, pd = 1e300;
    for (int n : {9, 17}) {
        auto L = std::make_shared<Lattice4D>(1.0, n, 4);
        Stencil S(L, 4);
        auto ra = polarization_residuals(*c1, *c2, S, 1.0, true);
        CHECK(ra.F < 1e-10);
        auto rl = polarization_residuals(*c1, *c2, S, 1.0, false);
        CHECK(rl.F < pf / 8);
        CHECK(ra.dstarF < pd / 8);
        pf = rl.F;
        pd = ra.dstarF;
        auto same = polarization_residuals(*c2, *c2, S, 1.0, true);
        CHECK(same.F == 0.0);
    }
    CHECK(pf < 1e-2);
    CHECK(pd < 1e-2);
}

TEST_CASE("commutator bound")
{
    Rng rng(11);
    auto c = commutator_bound_check(rng, 2000);
    CHECK(c.draws == 2000);
    CHECK(c.A <= 1e-12);
    CHECK(c.B <= 1e-12);
    // equality is attained: a frame direction with eigenvalue 1
    Quat z(0.0);
    Form1 A{ImQ{1, 0, 0}, ImQ{0, 0, 0}, ImQ{0, 0, 0}, ImQ{0, 0, 0}};
    CHECK(commutator_margin_A(z, A) <= 0.0);
}

TEST_CASE("poincare ratios and morrey norm")
{
    auto L = std::make_shared<Lattice4D>(2.0, 17, 4);
    Stencil S(L, 4);
    Field1 G = sample_potential(*ConnectionModel::basic(), *L);
    Form1 v{ImQ{1, 0, 0}, ImQ{0, 1, 0}, ImQ{0, 0, 0}, ImQ{0, 0, 1}};
    Field1 A = bump_form(*L, Quat(0.0), 1.5, v);
    auto r = poincare_ratio(S, G, A);
    Field1 A3 = A;
    for (auto& f : A3) f = 3.0 * f;
    auto r3 = poincare_ratio(S, G, A3);
    CHECK(r.r1 > 0);
    CHECK(r.r2 > 0);
    CHECK(std::fabs(r.r1 - r3.r1) < 1e-12 * r.r1);
    CHECK(std::fabs(r.r2 - r3.r2) < 1e-12 * r.r2);
    CHECK_THROWS_AS(poincare_ratio(S, G, Field1(L->size(), Form1{})), std::invalid_argument);

    CHECK(std::fabs(geodesic_distance(Quat(0.0), Quat(1.0)) - M_PI / 2) < 1e-14);
    CHECK(std::fabs(geodesic_distance(Quat(0.0), Quat(1e8)) - M_PI) < 1e-7);
    Scalar one(L->size(), 1.0);
    double m = morrey_norm(*L, one, 1.0, 4.0, {Quat(0.0), Quat(0.5, 0, 0, 0)}, {1.0, 1.5});
    CHECK(m > 2.0);
    CHECK(m <= 0.5 * M_PI * M_PI * 1.1);
    CHECK(morrey_norm(*L, Scalar(L->size(), 0.0), 1.0, 4.0, {Quat(0.0)}, {1.0}) == 0.0);
    CHECK(morrey_norm(*L, one, 1.0, 4.0, {Quat(0.0), Quat(0.5, 0, 0, 0), Quat(0, 0.5, 0, 0)}, {1.0, 1.5, 0.8}) >= m);
}
