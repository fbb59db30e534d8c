#include "yma/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "yma/quadrature.hpp"

namespace yma {

double chi_lambda(const Quat& z, double lambda)
{
    double s = norm2(z);
    double r = (1.0 + lambda * lambda * s) / (1.0 + s) / lambda;
    double r2 = r * r;
    return r2 * r2;
}

double dchi_dloglambda(const Quat& z, double lambda)
{
    double t = lambda * lambda * norm2(z);
    return chi_lambda(z, lambda) * 4.0 * (t - 1.0) / (t + 1.0);
}

double mu(const Quat& z)
{
    double s = norm2(z);
    return (s - 1.0) / (s + 1.0);
}

std::array<double, 4> dlogchi(const Quat& z, double lambda)
{
    double s = norm2(z);
    double l2 = lambda * lambda;
    double c = 8.0 * l2 / (1.0 + l2 * s) - 8.0 / (1.0 + s);
    return {c * z.w, c * z.x, c * z.y, c * z.z};
}

ConformalMap ConformalMap::dilation(double lambda)
{
    ConformalMap m;
    m.lambda = lambda;
    return m;
}

ConformalMap ConformalMap::translation(const Quat& b)
{
    ConformalMap m;
    m.xi2 = b;
    return m;
}

ConformalMap ConformalMap::rotation(const Quat& p, const Quat& q)
{
    ConformalMap m;
    m.p = p * (1.0 / norm(p));
    m.q = q * (1.0 / norm(q));
    return m;
}

ConformalMap ConformalMap::affine(double lambda, const Quat& b)
{
    ConformalMap m;
    m.lambda = lambda;
    m.xi2 = b;
    return m;
}

bool ConformalMap::is_linear() const
{
    return eps == 0 && norm2(xi1) == 0.0 && norm2(xi2) == 0.0;
}

Quat ConformalMap::apply(const Quat& z) const
{
    Quat u = z - xi1;
    if (eps == 2) {
        double n2 = norm2(u);
        if (n2 == 0.0) throw PoleHit("conformal map: zeta hits the inversion pole");
        u = u * (1.0 / n2);
    }
    return xi2 + lambda * (p * u * conj(q));
}

std::array<std::array<double, 4>, 4> ConformalMap::jacobian(const Quat& z) const
{
    std::array<std::array<double, 4>, 4> rot{};
    for (int b = 0; b < 4; ++b) {
        Quat c = p * basis(b) * conj(q);
        for (int a = 0; a < 4; ++a) rot[a][b] = lambda * c[a];
    }
    if (eps == 0) return rot;
    Quat u = z - xi1;
    double n2 = norm2(u);
    if (n2 == 0.0) throw PoleHit("conformal map: zeta hits the inversion pole");
    std::array<std::array<double, 4>, 4> inv{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) inv[a][b] = ((a == b ? 1.0 : 0.0) - 2.0 * u[a] * u[b] / n2) / n2;
    std::array<std::array<double, 4>, 4> J{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double s = 0;
            for (int c = 0; c < 4; ++c) s += rot[a][c] * inv[c][b];
            J[a][b] = s;
        }
    return J;
}

ConformalMap ConformalMap::inverse() const
{
    if (eps != 0) {
        // zeta = xi1 + lambda conj(p) (w - xi2) q / |w - xi2|^2
        ConformalMap m;
        m.eps = 2;
        m.xi1 = xi2;
        m.xi2 = xi1;
        m.lambda = lambda;
        m.p = conj(p);
        m.q = conj(q);
        return m;
    }
    ConformalMap m;
    m.xi1 = xi2;
    m.xi2 = xi1;
    m.lambda = 1.0 / lambda;
    m.p = conj(p);
    m.q = conj(q);
    return m;
}

std::string ConformalMap::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "lambda=" << lambda << " xi1=(" << xi1.w << "," << xi1.x << "," << xi1.y << "," << xi1.z << ")"
       << " xi2=(" << xi2.w << "," << xi2.x << "," << xi2.y << "," << xi2.z << ")"
       << " p=(" << p.w << "," << p.x << "," << p.y << "," << p.z << ")"
       << " q=(" << q.w << "," << q.x << "," << q.y << "," << q.z << ") eps=" << eps;
    return os.str();
}

ConformalMap compose(const ConformalMap& a, const ConformalMap& b)
{
    if (a.eps != 0 || b.eps != 0) throw std::invalid_argument("compose: only affine maps compose in closed form");
    ConformalMap m;
    m.xi2 = a.xi2;
    m.lambda = a.lambda * b.lambda;
    m.p = a.p * b.p;
    m.q = a.q * b.q;
    Quat shift = conj(b.p) * (b.xi2 - a.xi1) * b.q * (1.0 / b.lambda);
    m.xi1 = b.xi1 - shift;
    return m;
}

Curv hodge_star(const Curv& F)
{
    Curv S;
    S.set(0, 1, F(2, 3));
    S.set(0, 2, -F(1, 3));
    S.set(0, 3, F(1, 2));
    S.set(1, 2, F(0, 3));
    S.set(1, 3, -F(0, 2));
    S.set(2, 3, F(0, 1));
    return S;
}

std::pair<Curv, Curv> hodge_split(const Curv& F)
{
    Curv S = hodge_star(F);
    return {0.5 * (F + S), 0.5 * (F - S)};
}

RadialGrid RadialGrid::build(const std::vector<double>& breaks, int n)
{
    const GaussRule& g = gauss_legendre(n);
    RadialGrid r;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        double a = breaks[k], b = breaks[k + 1];
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < n; ++i) {
            r.theta.push_back(c + h * g.x[i]);
            r.w.push_back(h * g.w[i]);
        }
    }
    return r;
}

double RadialGrid::volume() const
{
    std::vector<double> t(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        double s = std::sin(theta[k]);
        t[k] = 2.0 * M_PI * M_PI * w[k] * s * s * s;
    }
    return pairwise_sum(t);
}

std::vector<double> radial_breaks(double r_scale)
{
    double ts = 2.0 * std::atan(r_scale);
    std::vector<double> b{0.0, M_PI};
    for (int k = 0; k <= 4; ++k) {
        b.push_back(ts / std::pow(2.0, k));
        b.push_back(M_PI - (M_PI - ts) / std::pow(2.0, k));
    }
    b.push_back(0.5 * M_PI);
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double x : b)
        if (out.empty() || x - out.back() > 1e-9) out.push_back(x);
    return out;
}

Lattice4D::Lattice4D(double R, int n_axis, int pad) : R_(R), n_(n_axis), pad_(pad)
{
    if (R <= 0 || n_axis < 3 || pad < 0) throw std::invalid_argument("Lattice4D: bad parameters");
    h_ = 2.0 * R / (n_axis - 1);
    h4_ = h_ * h_ * h_ * h_;
    m_ = n_ + 2 * pad_;
    stride_ = {std::int64_t(m_) * m_ * m_, std::int64_t(m_) * m_, m_, 1};
    std::int64_t total = std::int64_t(m_) * m_ * m_ * m_;
    cube_to_node_.assign(total, -1);
    double rmax = R_ + pad_ * h_ + 1e-9 * h_;
    for (std::int64_t c = 0; c < total; ++c) {
        std::array<int, 4> idx{int(c / stride_[0]), int(c / stride_[1] % m_), int(c / stride_[2] % m_), int(c % m_)};
        double r2 = 0;
        for (int a = 0; a < 4; ++a) r2 += axis_coord(idx[a]) * axis_coord(idx[a]);
        double r = std::sqrt(r2);
        if (r > rmax) continue;
        int layer = r <= R_ + 1e-9 * h_ ? 0 : int(std::ceil((r - R_) / h_ - 1e-9));
        cube_to_node_[c] = static_cast<std::int32_t>(node_cube_.size());
        if (layer == 0) ball_.push_back(static_cast<std::int32_t>(node_cube_.size()));
        node_cube_.push_back(c);
        layer_.push_back(static_cast<std::int8_t>(layer));
    }
}

std::array<int, 4> Lattice4D::index(std::size_t node) const
{
    std::int64_t c = node_cube_[node];
    return {int(c / stride_[0]), int(c / stride_[1] % m_), int(c / stride_[2] % m_), int(c % m_)};
}

Quat Lattice4D::coord(std::size_t node) const
{
    auto i = index(node);
    return {axis_coord(i[0]), axis_coord(i[1]), axis_coord(i[2]), axis_coord(i[3])};
}

std::int32_t Lattice4D::find(const std::array<int, 4>& idx) const
{
    std::int64_t c = 0;
    for (int a = 0; a < 4; ++a) {
        if (idx[a] < 0 || idx[a] >= m_) return -1;
        c += idx[a] * stride_[a];
    }
    return cube_to_node_[c];
}

std::int32_t Lattice4D::neighbor(std::size_t node, int axis, int offset) const
{
    std::int64_t c = node_cube_[node];
    int a = int(c / stride_[axis] % m_) + offset;
    if (a < 0 || a >= m_) return -1;
    return cube_to_node_[c + offset * stride_[axis]];
}

std::int32_t Lattice4D::locate(const Quat& z, double tol) const
{
    std::array<int, 4> idx;
    for (int a = 0; a < 4; ++a) {
        double t = z[a] / h_ + pad_ + 0.5 * (n_ - 1);
        double r = std::round(t);
        if (std::fabs(t - r) > tol) return -1;
        idx[a] = int(r);
    }
    return find(idx);
}

std::string Lattice4D::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "lattice R=" << R_ << " n=" << n_ << " h=" << h_ << " pad=" << pad_ << " nodes=" << size()
       << " ball=" << ball_size();
    return os.str();
}

} // namespace yma
