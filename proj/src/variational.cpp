#include "yma/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "yma/quadrature.hpp"

namespace yma {

namespace {

// Gamma^k_ij of the round metric in the chart: delta_ik phi_j + delta_jk phi_i - delta_ij phi_k
struct Christoffel {
    std::array<double, 4> p;
    explicit Christoffel(const Quat& z) : p(dphi(z)) {}
    double operator()(int k, int i, int j) const
    {
        return (i == k ? p[j] : 0.0) + (j == k ? p[i] : 0.0) - (i == j ? p[k] : 0.0);
    }
};

// fourth-order centred difference of g along axis i at z
template <class T, class G>
T fd4(const G& g, const Quat& z, int i, double h)
{
    Quat e = h * basis(i);
    return (2.0 / (3.0 * h)) * (g(z + e) - g(z - e)) + (-1.0 / (12.0 * h)) * (g(z + 2.0 * e) - g(z - 2.0 * e));
}

void require_depth(const Stencil& S, int levels)
{
    if (S.depth(levels) < 0)
        throw StencilOutOfDomain("lattice padding too small for nested stencils");
}

double sup_norm(const std::vector<double>& v)
{
    double m = 0;
    for (double x : v) m = std::max(m, x);
    return m;
}

} // namespace

Form1 dstar_F(const ConnectionModel& c, const Quat& z, double h)
{
    auto curv = [&c](const Quat& w) { return c.curvature(w); };
    Curv F = c.curvature(z);
    Form1 g = c.potential(z);
    double e = inv_conformal(z);
    Form1 out{};
    for (int i = 0; i < 4; ++i) {
        Curv dF = fd4<Curv>(curv, z, i, h);
        for (int j = 0; j < 4; ++j) out[j] += dF(i, j) + bracket(g[i], F(i, j));
    }
    return (-2.0 * e) * out;
}

GradientParts gradient_ym_alpha_lambda(const ConnectionModel& c, double alpha, double lambda, const Quat& z, double h)
{
    GradientParts r;
    Curv F = c.curvature(z);
    double f2 = norm2_g(F, z);
    double e = inv_conformal(z);
    double chi = chi_lambda(z, lambda);
    double P = std::pow(3.0 + chi * f2, alpha - 1.0);
    double kappa = (alpha - 1.0) * chi / (3.0 + chi * f2);
    auto dl = dlogchi(z, lambda);
    auto nf = [&c](const Quat& w) { return norm2_g(c.curvature(w), w); };
    r.dstarF = dstar_F(c, z, h);
    for (int i = 0; i < 4; ++i) {
        double df2 = fd4<double>(nf, z, i, h);
        for (int j = 0; j < 4; ++j) {
            r.theta1[j] += (-2.0 * e * kappa * df2) * F(i, j);
            r.theta2[j] += (-2.0 * e * kappa * f2 * dl[i]) * F(i, j);
        }
    }
    r.total = (alpha * P) * (r.dstarF + r.theta1 + r.theta2);
    return r;
}

GradientField gradient_lattice(const Stencil& S, const Field1& G, double alpha, double lambda)
{
    require_depth(S, 2);
    const Lattice4D& L = S.lattice();
    int d1 = S.depth(1);
    Field2 F = lattice_curvature(S, G, d1);
    Scalar f2(L.size(), 0.0);
    for (auto n : nodes_within(L, d1)) {
        double e = inv_conformal(L.coord(n));
        f2[n] = e * e * flat_norm2(F[n]);
    }
    GradientField out;
    out.dstarF.assign(L.size(), Form1{});
    out.theta1.assign(L.size(), Form1{});
    out.theta2.assign(L.size(), Form1{});
    out.total.assign(L.size(), Form1{});
    for (auto n : L.ball_nodes()) {
        Quat z = L.coord(n);
        double e = inv_conformal(z);
        double chi = chi_lambda(z, lambda);
        double P = std::pow(3.0 + chi * f2[n], alpha - 1.0);
        double kappa = (alpha - 1.0) * chi / (3.0 + chi * f2[n]);
        auto dl = dlogchi(z, lambda);
        Curv Fn = unpack(F[n]);
        Form1 ds{}, t1{}, t2{};
        for (int i = 0; i < 4; ++i) {
            Curv dF = unpack(S.d(F, n, i));
            double df2 = S.d(f2, n, i);
            for (int j = 0; j < 4; ++j) {
                ds[j] += dF(i, j) + bracket(G[n][i], Fn(i, j));
                t1[j] += (kappa * df2) * Fn(i, j);
                t2[j] += (kappa * f2[n] * dl[i]) * Fn(i, j);
            }
        }
        out.dstarF[n] = (-2.0 * e) * ds;
        out.theta1[n] = (-2.0 * e) * t1;
        out.theta2[n] = (-2.0 * e) * t2;
        out.total[n] = (alpha * P) * (out.dstarF[n] + out.theta1[n] + out.theta2[n]);
    }
    return out;
}

Field1 dstar_F_lattice(const Stencil& S, const Field1& G) { return gradient_lattice(S, G, 1.0, 1.0).dstarF; }

double discrete_energy(const Stencil& S, const Field1& G, double alpha, double lambda)
{
    require_depth(S, 1);
    const Lattice4D& L = S.lattice();
    Field2 F = lattice_curvature(S, G, 0);
    const auto& ball = L.ball_nodes();
    std::vector<double> t(ball.size());
    for (std::size_t k = 0; k < ball.size(); ++k) {
        auto n = ball[k];
        Quat z = L.coord(n);
        double e = inv_conformal(z);
        double chi = chi_lambda(z, lambda);
        double f2 = e * e * flat_norm2(F[n]);
        t[k] = L.weight(n) * 0.5 * std::pow(3.0 + chi * f2, alpha) / chi;
    }
    return pairwise_sum(t);
}

Field1 discrete_energy_gradient(const Stencil& S, const Field1& G, double alpha, double lambda)
{
    require_depth(S, 1);
    const Lattice4D& L = S.lattice();
    const double ih = 1.0 / L.h();
    Field2 F = lattice_curvature(S, G, 0);
    Field1 adj(L.size(), Form1{});
    for (auto n : L.ball_nodes()) {
        Quat z = L.coord(n);
        double e = inv_conformal(z);
        double chi = chi_lambda(z, lambda);
        double f2 = e * e * flat_norm2(F[n]);
        double P = std::pow(3.0 + chi * f2, alpha - 1.0);
        double s = 2.0 * alpha * L.weight(n) * P * e * e;
        for (int p = 0; p < 6; ++p) {
            int i = kPairI[p], j = kPairJ[p];
            ImQ phi = s * F[n][p];
            for (int o = 1; o <= S.half_width(); ++o) {
                double c = S.coef(o) * ih;
                adj[L.neighbor(n, i, o)][j] += c * phi;
                adj[L.neighbor(n, i, -o)][j] -= c * phi;
                adj[L.neighbor(n, j, o)][i] -= c * phi;
                adj[L.neighbor(n, j, -o)][i] += c * phi;
            }
            adj[n][i] += bracket(G[n][j], phi);
            adj[n][j] += bracket(phi, G[n][i]);
        }
    }
    for (std::size_t n = 0; n < L.size(); ++n) adj[n] = (1.0 / (L.weight(n) * inv_conformal(L.coord(n)))) * adj[n];
    return adj;
}

Field0 dstar_1form(const Stencil& S, const Field1& G, const Field1& Xi)
{
    const Lattice4D& L = S.lattice();
    Field0 out(L.size(), ImQ{});
    for (auto n : nodes_within(L, S.depth(1))) {
        Quat z = L.coord(n);
        auto ph = dphi(z);
        ImQ s{};
        for (int i = 0; i < 4; ++i) s += S.d(Xi, n, i)[i] + bracket(G[n][i], Xi[n][i]) + (2.0 * ph[i]) * Xi[n][i];
        out[n] = (-inv_conformal(z)) * s;
    }
    return out;
}

Field1 jacobi_apply(const Stencil& S, const Field1& G, const Field2& F, const Field1& Xi)
{
    require_depth(S, 2);
    const Lattice4D& L = S.lattice();
    Field2 W(L.size());
    for (auto n : nodes_within(L, S.depth(1))) {
        std::array<Form1, 4> dX;
        for (int i = 0; i < 4; ++i) dX[i] = S.d(Xi, n, i);
        for (int p = 0; p < 6; ++p) {
            int i = kPairI[p], j = kPairJ[p];
            W[n][p] = dX[i][j] - dX[j][i] + bracket(G[n][i], Xi[n][j]) + bracket(Xi[n][i], G[n][j]);
        }
    }
    Field1 out(L.size(), Form1{});
    for (auto n : L.ball_nodes()) {
        double e = inv_conformal(L.coord(n));
        Curv Wn = unpack(W[n]), Fn = unpack(F[n]);
        Form1 r{};
        for (int k = 0; k < 4; ++k) {
            Curv dW = unpack(S.d(W, n, k));
            for (int i = 0; i < 4; ++i) r[i] += dW(k, i) + bracket(G[n][k], Wn(k, i)) - bracket(Fn(k, i), Xi[n][k]);
        }
        out[n] = e * r;
    }
    return out;
}

namespace {

// T_ij = D_i Xi_j - Gamma^k_ij Xi_k on nodes with layer <= max_layer
Field11 covariant_derivative(const Stencil& S, const Field1& G, const Field1& Xi, int max_layer)
{
    const Lattice4D& L = S.lattice();
    Field11 T(L.size());
    for (auto n : nodes_within(L, max_layer)) {
        Christoffel C(L.coord(n));
        for (int i = 0; i < 4; ++i) {
            Form1 d = S.d(Xi, n, i);
            for (int j = 0; j < 4; ++j) {
                ImQ v = d[j] + bracket(G[n][i], Xi[n][j]);
                for (int k = 0; k < 4; ++k) v -= C(k, i, j) * Xi[n][k];
                T[n][i][j] = v;
            }
        }
    }
    return T;
}

} // namespace

Field1 jacobi_bochner(const Stencil& S, const Field1& G, const Field2& F, const Field1& Xi)
{
    require_depth(S, 2);
    const Lattice4D& L = S.lattice();
    Field11 T = covariant_derivative(S, G, Xi, S.depth(1));
    Field0 s = dstar_1form(S, G, Xi);
    Field1 out(L.size(), Form1{});
    for (auto n : L.ball_nodes()) {
        Quat z = L.coord(n);
        double e = inv_conformal(z);
        Christoffel C(z);
        Curv Fn = unpack(F[n]);
        ImQ ds[4];
        for (int j = 0; j < 4; ++j) ds[j] = S.d(s, n, j);
        Form1 lap{};
        for (int i = 0; i < 4; ++i) {
            FormJac dT = S.d(T, n, i);
            for (int j = 0; j < 4; ++j) {
                ImQ v = dT[i][j] + bracket(G[n][i], T[n][i][j]);
                for (int m = 0; m < 4; ++m) v -= C(m, i, i) * T[n][m][j] + C(m, i, j) * T[n][i][m];
                lap[j] += v;
            }
        }
        Form1 r{};
        for (int j = 0; j < 4; ++j) {
            ImQ fx{};
            for (int k = 0; k < 4; ++k) fx += bracket(Fn(k, j), Xi[n][k]);
            r[j] = e * lap[j] + ds[j] + bracket(G[n][j], s[n]) - 3.0 * Xi[n][j] - (2.0 * e) * fx;
        }
        out[n] = r;
    }
    return out;
}

ModuliBasis moduli_basis(std::shared_ptr<const Lattice4D> L)
{
    ModuliBasis B;
    B.lattice = L;
    B.names = {"dilation", "translation_1", "translation_i", "translation_j", "translation_k"};
    for (int a = 0; a < 5; ++a) B.b.emplace_back(L->size(), Form1{});
    for (std::size_t n = 0; n < L->size(); ++n) {
        Quat z = L->coord(n);
        double s = norm2(z);
        Curv F = adhm_curvature(Quat(0.0), 1.0, z);
        for (int a = 0; a < 5; ++a) {
            std::array<double, 4> X;
            for (int i = 0; i < 4; ++i) {
                if (a == 0)
                    X[i] = -z[i];
                else
                    X[i] = (i == a - 1 ? 0.5 * (1.0 + s) : 0.0) - z[a - 1] * z[i];
            }
            Form1 v{};
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 4; ++i) v[j] += X[i] * F(i, j);
            B.b[a][n] = v;
        }
    }
    // modified Gram-Schmidt, two passes
    for (int pass = 0; pass < 2; ++pass)
        for (int a = 0; a < 5; ++a) {
            for (int c = 0; c < a; ++c) {
                double d = l2_dot(*L, B.b[a], B.b[c]);
                for (std::size_t n = 0; n < L->size(); ++n) B.b[a][n] = B.b[a][n] - d * B.b[c][n];
            }
            double nn = l2_norm(*L, B.b[a]);
            for (auto& v : B.b[a]) v = (1.0 / nn) * v;
        }
    return B;
}

std::vector<std::vector<double>> gram_matrix(const ModuliBasis& B)
{
    std::size_t m = B.b.size();
    std::vector<std::vector<double>> g(m, std::vector<double>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c) g[a][c] = l2_dot(*B.lattice, B.b[a], B.b[c]);
    return g;
}

Field1 kernel_project(const Field1& Xi, const ModuliBasis& B)
{
    Field1 out(Xi.size(), Form1{});
    for (const auto& b : B.b) {
        double c = l2_dot(*B.lattice, Xi, b);
        for (std::size_t n = 0; n < Xi.size(); ++n) out[n] = out[n] + c * b[n];
    }
    return out;
}

PolarizationResiduals polarization_residuals(const ConnectionModel& c1, const ConnectionModel& c2, const Stencil& S,
                                             double radius, bool analytic_jacobian)
{
    require_depth(S, 1);
    const Lattice4D& L = S.lattice();
    int d1 = S.depth(1);
    Field1 G1 = sample_potential(c1, L), G2 = sample_potential(c2, L);
    Field1 Y(L.size());
    for (std::size_t n = 0; n < L.size(); ++n) Y[n] = G1[n] - G2[n];
    // W = D_2 Y + [Y ^ Y]
    Field2 W(L.size());
    for (auto n : nodes_within(L, d1)) {
        FormJac dY;
        if (analytic_jacobian) {
            Quat z = L.coord(n);
            FormJac j1 = c1.potential_jacobian(z), j2 = c2.potential_jacobian(z);
            for (int i = 0; i < 4; ++i) dY[i] = j1[i] - j2[i];
        } else {
            for (int i = 0; i < 4; ++i) dY[i] = S.d(Y, n, i);
        }
        for (int p = 0; p < 6; ++p) {
            int i = kPairI[p], j = kPairJ[p];
            W[n][p] = dY[i][j] - dY[j][i] + bracket(G2[n][i], Y[n][j]) + bracket(Y[n][i], G2[n][j]) +
                      bracket(Y[n][i], Y[n][j]);
        }
    }
    std::vector<double> rf, rd;
    for (auto n : L.ball_nodes()) {
        Quat z = L.coord(n);
        if (norm(z) > radius) continue;
        Curv F1 = c1.curvature(z), F2 = c2.curvature(z);
        Curv Wn = unpack(W[n]);
        rf.push_back(std::sqrt(flat_norm2(F1 - F2 - Wn)));

        double e = inv_conformal(z);
        Form1 lhs = dstar_F(c1, z) - dstar_F(c2, z);
        Form1 rhs{};
        for (int i = 0; i < 4; ++i) {
            Curv dW = unpack(S.d(W, n, i));
            for (int j = 0; j < 4; ++j)
                rhs[j] += (-2.0 * e) * (dW(i, j) + bracket(G2[n][i], Wn(i, j)) + bracket(Y[n][i], F1(i, j)));
        }
        rd.push_back(std::sqrt(flat_norm2(lhs - rhs)));
    }
    return {sup_norm(rf), sup_norm(rd)};
}

double commutator_margin_A(const Quat& z, const Form1& A)
{
    double e = inv_conformal(z);
    Curv F = adhm_curvature(Quat(0.0), 1.0, z);
    double lhs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) lhs += dot(F(i, j), bracket(A[i], A[j]));
    return e * e * lhs - e * flat_norm2(A);
}

double commutator_margin_B(const Quat& z, const FormJac& B)
{
    double e = inv_conformal(z);
    Curv F = adhm_curvature(Quat(0.0), 1.0, z);
    double lhs = 0, n2 = 0;
    for (int k = 0; k < 4; ++k) {
        n2 += flat_norm2(B[k]);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) lhs += dot(F(i, j), bracket(B[k][i], B[k][j]));
    }
    return e * e * e * lhs - 4.0 * e * e * n2;
}

CommutatorCheck commutator_bound_check(Rng& rng, int draws)
{
    CommutatorCheck c;
    for (int d = 0; d < draws; ++d) {
        Quat z = rng.quat(1.5);
        Form1 A{rng.imq(), rng.imq(), rng.imq(), rng.imq()};
        FormJac B;
        for (auto& row : B) row = {rng.imq(), rng.imq(), rng.imq(), rng.imq()};
        c.A = std::max(c.A, commutator_margin_A(z, A));
        c.B = std::max(c.B, commutator_margin_B(z, B));
        ++c.draws;
    }
    return c;
}

Field1 bump_form(const Lattice4D& L, const Quat& center, double rho, const Form1& v)
{
    Field1 out(L.size(), Form1{});
    for (std::size_t n = 0; n < L.size(); ++n) {
        double u = norm2(L.coord(n) - center) / (rho * rho);
        if (u < 1.0) out[n] = std::exp(1.0 - 1.0 / (1.0 - u)) * v;
    }
    return out;
}

PoincareRatios poincare_ratio(const Stencil& S, const Field1& G, const Field1& A)
{
    require_depth(S, 2);
    const Lattice4D& L = S.lattice();
    Field11 T = covariant_derivative(S, G, A, S.depth(1));
    const auto& ball = L.ball_nodes();
    std::vector<double> a0(ball.size()), a1(ball.size()), a2(ball.size());
    for (std::size_t k = 0; k < ball.size(); ++k) {
        auto n = ball[k];
        Quat z = L.coord(n);
        double e = inv_conformal(z), w = L.weight(n);
        Christoffel C(z);
        double t2 = 0, u2 = 0;
        for (int i = 0; i < 4; ++i) t2 += flat_norm2(T[n][i]);
        for (int kk = 0; kk < 4; ++kk) {
            FormJac dT = S.d(T, n, kk);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    ImQ v = dT[i][j] + bracket(G[n][kk], T[n][i][j]);
                    for (int m = 0; m < 4; ++m) v -= C(m, kk, i) * T[n][m][j] + C(m, kk, j) * T[n][i][m];
                    u2 += norm2(v);
                }
        }
        a0[k] = w * e * flat_norm2(A[n]);
        a1[k] = w * e * e * t2;
        a2[k] = w * e * e * e * u2;
    }
    double n0 = std::sqrt(pairwise_sum(a0)), n1 = std::sqrt(pairwise_sum(a1)), n2 = std::sqrt(pairwise_sum(a2));
    if (n0 == 0.0) throw std::invalid_argument("poincare_ratio: zero field");
    return {n0 / n1, n1 / n2};
}

double geodesic_distance(const Quat& a, const Quat& b)
{
    double chord = 2.0 * norm(a - b) / std::sqrt((1.0 + norm2(a)) * (1.0 + norm2(b)));
    return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

double morrey_norm(const Lattice4D& L, const Scalar& u_abs, double p, double lam_exp, const std::vector<Quat>& centers,
                   const std::vector<double>& radii)
{
    if (p < 1 || lam_exp < 0) throw std::invalid_argument("morrey_norm: need p >= 1 and lam_exp >= 0");
    double best = 0;
    const auto& ball = L.ball_nodes();
    std::vector<double> t(ball.size());
    for (const Quat& c : centers)
        for (double rho : radii) {
            for (std::size_t k = 0; k < ball.size(); ++k) {
                auto n = ball[k];
                Quat z = L.coord(n);
                t[k] = geodesic_distance(z, c) <= rho ? L.weight(n) * std::pow(u_abs[n], p) : 0.0;
            }
            double v = std::pow(std::pow(rho, -lam_exp) * pairwise_sum(t), 1.0 / p);
            best = std::max(best, v);
        }
    return best;
}

} // namespace yma
