#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "yma/forms.hpp"

namespace yma {

// Chart geometry of the unit round S^4 in stereographic coordinates:
// g = e^{2 phi} delta with e^{phi} = 2 / (1 + |zeta|^2).

inline double radius2(const Quat& z) { return norm2(z); }

// dV_g / dV
inline double round_weight(const Quat& z)
{
    double t = 1.0 + norm2(z);
    return 16.0 / (t * t * t * t);
}

// e^{-2 phi}: converts chart 1-form norms to round norms.
inline double inv_conformal(const Quat& z)
{
    double t = 1.0 + norm2(z);
    return 0.25 * t * t;
}

// d_i phi
inline std::array<double, 4> dphi(const Quat& z)
{
    double t = -2.0 / (1.0 + norm2(z));
    return {t * z.w, t * z.x, t * z.y, t * z.z};
}

// |F|^2_g (full double sum).
inline double norm2_g(const Curv& F, const Quat& z)
{
    double e = inv_conformal(z);
    return e * e * flat_norm2(F);
}
inline double norm2_g(const Form1& a, const Quat& z) { return inv_conformal(z) * flat_norm2(a); }

double chi_lambda(const Quat& z, double lambda);
double dchi_dloglambda(const Quat& z, double lambda);
double mu(const Quat& z);
// d_i log chi_lambda
std::array<double, 4> dlogchi(const Quat& z, double lambda);

inline constexpr double kVolS4 = 8.0 * M_PI * M_PI / 3.0;

struct PoleHit : std::domain_error {
    using std::domain_error::domain_error;
};

// zeta -> xi2 + lambda * p (zeta - xi1) / |zeta - xi1|^eps * conj(q)
struct ConformalMap {
    Quat xi1{0.0};
    Quat xi2{0.0};
    double lambda = 1.0;
    Quat p{1.0};
    Quat q{1.0};
    int eps = 0;

    static ConformalMap identity() { return {}; }
    static ConformalMap dilation(double lambda);
    static ConformalMap translation(const Quat& b);
    static ConformalMap rotation(const Quat& p, const Quat& q);
    // zeta -> lambda * zeta + b
    static ConformalMap affine(double lambda, const Quat& b);

    bool is_linear() const;
    bool is_affine() const { return eps == 0; }
    Quat apply(const Quat& z) const;
    // J[a][b] = d phi^a / d zeta^b
    std::array<std::array<double, 4>, 4> jacobian(const Quat& z) const;
    ConformalMap inverse() const;
    std::string describe() const;
};

inline Quat conformal_apply(const ConformalMap& m, const Quat& z) { return m.apply(z); }

// a o b for affine maps.
ConformalMap compose(const ConformalMap& a, const ConformalMap& b);

// Hodge star on 2-forms, orientation eps_1234 = +1. Conformally invariant in 4D so chart
// components can be used directly.
Curv hodge_star(const Curv& F);
std::pair<Curv, Curv> hodge_split(const Curv& F);

struct RadialGrid {
    std::vector<double> theta;
    std::vector<double> w;

    // Composite Gauss-Legendre in geodesic polar angle with n nodes per panel.
    static RadialGrid build(const std::vector<double>& breaks, int n);
    static RadialGrid uniform(int n) { return build({0.0, M_PI}, n); }
    int size() const { return static_cast<int>(theta.size()); }
    // 2 pi^2 sum w sin^3
    double volume() const;
};

// Breakpoints in theta clustering around the chart radius r_scale.
std::vector<double> radial_breaks(double r_scale);

// Axis-aligned chart lattice on the ball |zeta| <= R with pad layers of extra nodes.
class Lattice4D {
public:
    Lattice4D(double R, int n_axis, int pad = 4);

    double R() const { return R_; }
    double h() const { return h_; }
    int n_axis() const { return n_; }
    int pad() const { return pad_; }
    int side() const { return m_; }
    std::size_t size() const { return node_cube_.size(); }
    std::size_t ball_size() const { return ball_.size(); }
    const std::vector<std::int32_t>& ball_nodes() const { return ball_; }

    std::array<int, 4> index(std::size_t node) const;
    Quat coord(std::size_t node) const;
    double axis_coord(int a) const { return (a - pad_ - 0.5 * (n_ - 1)) * h_; }
    // 0 inside the ball, k for R + (k-1) h < |zeta| <= R + k h
    int layer(std::size_t node) const { return layer_[node]; }
    bool in_ball(std::size_t node) const { return layer_[node] == 0; }
    double weight(std::size_t node) const { return round_weight(coord(node)) * h4_; }
    // neighbor along axis with signed offset; -1 if not stored
    std::int32_t neighbor(std::size_t node, int axis, int offset) const;
    std::int32_t find(const std::array<int, 4>& idx) const;
    // node at coordinate z, -1 when z is not a lattice point
    std::int32_t locate(const Quat& z, double tol = 1e-9) const;
    std::string describe() const;

private:
    double R_, h_, h4_;
    int n_, pad_, m_;
    std::vector<std::int32_t> cube_to_node_;
    std::vector<std::int64_t> node_cube_;
    std::vector<std::int8_t> layer_;
    std::vector<std::int32_t> ball_;
    std::array<std::int64_t, 4> stride_;
};

} // namespace yma
