#include "yma/lattice_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "yma/quadrature.hpp"

namespace yma {

Stencil::Stencil(std::shared_ptr<const Lattice4D> L, int order) : L_(std::move(L)), order_(order)
{
    if (!L_) throw std::invalid_argument("Stencil: null lattice");
    if (order == 2)
        coef_ = {0.5, 0.0, 0.0};
    else if (order == 4)
        coef_ = {2.0 / 3.0, -1.0 / 12.0, 0.0};
    else if (order == 6)
        coef_ = {0.75, -0.15, 1.0 / 60.0};
    else
        throw std::invalid_argument("Stencil: order must be 2, 4 or 6");
    inv_h_ = 1.0 / L_->h();
}

std::vector<std::int32_t> nodes_within(const Lattice4D& L, int max_layer)
{
    std::vector<std::int32_t> out;
    for (std::size_t n = 0; n < L.size(); ++n)
        if (L.layer(n) <= max_layer) out.push_back(static_cast<std::int32_t>(n));
    return out;
}

Field1 sample_potential(const ConnectionModel& c, const Lattice4D& L)
{
    Field1 out(L.size());
    for (std::size_t n = 0; n < L.size(); ++n) out[n] = c.potential(L.coord(n));
    return out;
}

Field2 sample_curvature(const ConnectionModel& c, const Lattice4D& L, int max_layer)
{
    Field2 out(L.size());
    for (auto n : nodes_within(L, max_layer)) out[n] = pack(c.curvature(L.coord(n)));
    return out;
}

Field2 lattice_curvature(const Stencil& S, const Field1& G, int max_layer)
{
    const Lattice4D& L = S.lattice();
    Field2 out(L.size());
    for (auto n : nodes_within(L, max_layer)) {
        std::array<Form1, 4> dG;
        for (int i = 0; i < 4; ++i) dG[i] = S.d(G, n, i);
        const Form1& g = G[n];
        for (int p = 0; p < 6; ++p) {
            int i = kPairI[p], j = kPairJ[p];
            out[n][p] = dG[i][j] - dG[j][i] + bracket(g[i], g[j]);
        }
    }
    return out;
}

namespace {

template <class F>
double ball_sum(const Lattice4D& L, F&& term)
{
    const auto& ball = L.ball_nodes();
    std::vector<double> t(ball.size());
    for (std::size_t k = 0; k < ball.size(); ++k) t[k] = term(ball[k]);
    return pairwise_sum(t);
}

} // namespace

double l2_dot(const Lattice4D& L, const Field1& a, const Field1& b)
{
    return ball_sum(L, [&](std::int32_t n) { return L.weight(n) * inv_conformal(L.coord(n)) * flat_dot(a[n], b[n]); });
}

double l2_norm(const Lattice4D& L, const Field1& a) { return std::sqrt(std::max(0.0, l2_dot(L, a, a))); }

double l2_norm(const Lattice4D& L, const Field2& F)
{
    return std::sqrt(ball_sum(L, [&](std::int32_t n) {
        double e = inv_conformal(L.coord(n));
        return L.weight(n) * e * e * flat_norm2(F[n]);
    }));
}

double l2_norm(const Lattice4D& L, const Field0& s)
{
    return std::sqrt(ball_sum(L, [&](std::int32_t n) { return L.weight(n) * norm2(s[n]); }));
}

double l2_norm(const Lattice4D& L, const Field1& a, double radius)
{
    return std::sqrt(ball_sum(L, [&](std::int32_t n) {
        Quat z = L.coord(n);
        if (norm(z) > radius) return 0.0;
        return L.weight(n) * inv_conformal(z) * flat_norm2(a[n]);
    }));
}

} // namespace yma
