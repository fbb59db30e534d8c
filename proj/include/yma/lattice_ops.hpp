#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "yma/gauge.hpp"

namespace yma {

// Per-node fields on a Lattice4D (indexed by storage node).
using Field0 = std::vector<ImQ>;
using Field1 = std::vector<Form1>;
using Scalar = std::vector<double>;

// Independent components (01, 02, 03, 12, 13, 23) of a 2-form.
using Curv6 = std::array<ImQ, 6>;
using Field2 = std::vector<Curv6>;

inline constexpr int kPairI[6] = {0, 0, 0, 1, 1, 2};
inline constexpr int kPairJ[6] = {1, 2, 3, 2, 3, 3};

inline Curv6 pack(const Curv& F) { return {F(0, 1), F(0, 2), F(0, 3), F(1, 2), F(1, 3), F(2, 3)}; }
inline Curv unpack(const Curv6& c)
{
    Curv F;
    for (int p = 0; p < 6; ++p) F.set(kPairI[p], kPairJ[p], c[p]);
    return F;
}

inline Curv6 operator+(const Curv6& a, const Curv6& b)
{
    Curv6 r;
    for (int p = 0; p < 6; ++p) r[p] = a[p] + b[p];
    return r;
}
inline Curv6 operator-(const Curv6& a, const Curv6& b)
{
    Curv6 r;
    for (int p = 0; p < 6; ++p) r[p] = a[p] - b[p];
    return r;
}
inline Curv6 operator*(double s, const Curv6& a)
{
    Curv6 r;
    for (int p = 0; p < 6; ++p) r[p] = s * a[p];
    return r;
}
// |F|^2 as the full double sum
inline double flat_norm2(const Curv6& c)
{
    double s = 0;
    for (const auto& v : c) s += norm2(v);
    return 2.0 * s;
}

// 2-tensors T[i][j] (FormJac layout)
inline FormJac operator+(const FormJac& a, const FormJac& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
inline FormJac operator-(const FormJac& a, const FormJac& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
inline FormJac operator*(double s, const FormJac& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
using Field11 = std::vector<FormJac>;

// Centred difference stencils of order 2, 4 or 6 on a lattice.
class Stencil {
public:
    Stencil(std::shared_ptr<const Lattice4D> L, int order);

    const Lattice4D& lattice() const { return *L_; }
    std::shared_ptr<const Lattice4D> lattice_ptr() const { return L_; }
    int order() const { return order_; }
    int half_width() const { return order_ / 2; }
    // largest layer at which `levels` nested derivatives stay inside the stored nodes
    int depth(int levels) const { return L_->pad() - levels * half_width(); }
    // weight of the offset-o pair (f[+o] - f[-o]) / h, o = 1..half_width()
    double coef(int o) const { return coef_[o - 1]; }

    // d/dzeta^axis of f at node
    template <class T>
    T d(const std::vector<T>& f, std::int32_t node, int axis) const
    {
        const int hw = half_width();
        T acc{};
        for (int o = 1; o <= hw; ++o) {
            auto p = L_->neighbor(node, axis, o), m = L_->neighbor(node, axis, -o);
            if (p < 0 || m < 0) throw StencilOutOfDomain("stencil leaves the lattice");
            acc = acc + (coef_[o - 1] * inv_h_) * (f[p] - f[m]);
        }
        return acc;
    }

private:
    std::shared_ptr<const Lattice4D> L_;
    int order_;
    double inv_h_;
    std::array<double, 3> coef_{};
};

// Nodes with layer <= max_layer, ascending.
std::vector<std::int32_t> nodes_within(const Lattice4D& L, int max_layer);

Field1 sample_potential(const ConnectionModel& c, const Lattice4D& L);
Field2 sample_curvature(const ConnectionModel& c, const Lattice4D& L, int max_layer);

// F_ij = d_i G_j - d_j G_i + [G_i, G_j] on nodes with layer <= max_layer.
Field2 lattice_curvature(const Stencil& S, const Field1& G, int max_layer);

// Round L^2 inner products over the ball |zeta| <= R.
double l2_dot(const Lattice4D& L, const Field1& a, const Field1& b);
double l2_norm(const Lattice4D& L, const Field1& a);
double l2_norm(const Lattice4D& L, const Field2& F);
double l2_norm(const Lattice4D& L, const Field0& s);
// Same restricted to nodes with |zeta| <= radius.
double l2_norm(const Lattice4D& L, const Field1& a, double radius);

} // namespace yma
