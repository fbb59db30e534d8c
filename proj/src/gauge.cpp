#include "yma/gauge.hpp"

#include <cmath>

#include "yma/quadrature.hpp"

namespace yma {

// ---------------------------------------------------------------- RadialProfile

void RadialProfile::init(int n)
{
    if (n < 2) throw std::invalid_argument("RadialProfile: need at least 2 nodes");
    const GaussRule& g = gauss_legendre(n);
    x_.assign(1, -1.0);
    x_.insert(x_.end(), g.x.begin(), g.x.end());
    wx_ = g.w;
    int m = n + 1;
    std::vector<double> logw(m), sgn(m, 1.0);
    double lmax = -1e300;
    for (int j = 0; j < m; ++j) {
        double l = 0;
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            double d = x_[j] - x_[k];
            if (d < 0) sgn[j] = -sgn[j];
            l -= std::log(std::fabs(d));
        }
        logw[j] = l;
        lmax = std::max(lmax, l);
    }
    bw_.resize(m);
    for (int j = 0; j < m; ++j) bw_[j] = sgn[j] * std::exp(logw[j] - lmax);
    D_.assign(n, std::vector<double>(m, 0.0));
    for (int k = 1; k < m; ++k) {
        double diag = 0;
        for (int j = 0; j < m; ++j) {
            if (j == k) continue;
            double v = (bw_[j] / bw_[k]) / (x_[k] - x_[j]);
            D_[k - 1][j] = v;
            diag -= v;
        }
        D_[k - 1][k] = diag;
    }
}

RadialProfile::RadialProfile(int n, std::vector<double> q_nodes, double q_pole)
{
    init(n);
    if (static_cast<int>(q_nodes.size()) != n) throw std::invalid_argument("RadialProfile: node count mismatch");
    q_.assign(1, q_pole);
    q_.insert(q_.end(), q_nodes.begin(), q_nodes.end());
}

RadialProfile RadialProfile::from_function(int n, const std::function<double(double)>& f, double q_pole)
{
    RadialProfile p;
    p.init(n);
    p.q_.assign(n + 1, 0.0);
    p.q_[0] = q_pole;
    for (int k = 0; k < n; ++k) {
        double s = p.node_s(k);
        p.q_[k + 1] = (1.0 + s) * f(s);
    }
    return p;
}

RadialProfile RadialProfile::adhm(int n, double lambda)
{
    double l2 = lambda * lambda;
    return from_function(n, [l2](double s) { return 1.0 / (s + l2); }, 1.0);
}

// The interpolant is evaluated in u = 1 + x so that points next to the pole keep their
// distance 2/(1+s) to it at full relative precision.
double RadialProfile::q_u(double u) const
{
    double num = 0, den = 0;
    for (std::size_t j = 0; j < x_.size(); ++j) {
        double d = u - (1.0 + x_[j]);
        if (d == 0.0) return q_[j];
        double t = bw_[j] / d;
        num += t * q_[j];
        den += t;
    }
    return num / den;
}

double RadialProfile::dq_u(double u) const
{
    for (std::size_t j = 1; j < x_.size(); ++j) {
        if (u == 1.0 + x_[j]) {
            double s = 0;
            for (std::size_t m = 0; m < x_.size(); ++m) s += D_[j - 1][m] * q_[m];
            return s;
        }
    }
    if (u == 0.0) {
        double s = 0, diag = 0;
        for (std::size_t m = 1; m < x_.size(); ++m) {
            double v = (bw_[m] / bw_[0]) / (x_[0] - x_[m]);
            s += v * q_[m];
            diag -= v;
        }
        return s + diag * q_[0];
    }
    double p = q_u(u);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < x_.size(); ++j) {
        double d = u - (1.0 + x_[j]);
        if (d == 0.0) return dq_u(1.0 + x_[j]);
        double t = bw_[j] / d;
        num += t * (p - q_[j]) / d;
        den += t;
    }
    return num / den;
}

double RadialProfile::q_at(double x) const { return q_u(1.0 + x); }
double RadialProfile::dq_at(double x) const { return dq_u(1.0 + x); }

double RadialProfile::f(double s) const
{
    double u = 2.0 / (1.0 + s);
    return q_u(u) * u * 0.5;
}

double RadialProfile::df(double s) const
{
    double u = 2.0 / (1.0 + s);
    double dfdx = 0.5 * (dq_u(u) * u + q_u(u));
    return dfdx * (-0.5 * u * u);
}

// ---------------------------------------------------------------- GaugeTransform

GaugeTransform GaugeTransform::identity()
{
    GaugeTransform t;
    t.value = [](const Quat&) { return Quat(1.0); };
    t.grad = [](const Quat&) { return std::array<Quat, 4>{}; };
    t.kind = "identity";
    return t;
}

GaugeTransform GaugeTransform::constant(const Quat& q)
{
    Quat u = q * (1.0 / norm(q));
    GaugeTransform t;
    t.value = [u](const Quat&) { return u; };
    t.grad = [](const Quat&) { return std::array<Quat, 4>{}; };
    t.kind = "constant";
    return t;
}

GaugeTransform GaugeTransform::bump(const Quat& center, double rho, const ImQ& v)
{
    GaugeTransform t;
    auto g = [center, rho](const Quat& z, std::array<double, 4>* dg) {
        Quat d = z - center;
        double u = norm2(d) / (rho * rho);
        if (u >= 1.0) {
            if (dg) dg->fill(0.0);
            return 0.0;
        }
        double val = std::exp(1.0 - 1.0 / (1.0 - u));
        if (dg) {
            double c = -val / ((1.0 - u) * (1.0 - u)) * 2.0 / (rho * rho);
            for (int i = 0; i < 4; ++i) (*dg)[i] = c * d[i];
        }
        return val;
    };
    t.value = [g, v](const Quat& z) { return exp_im(g(z, nullptr) * v); };
    t.grad = [g, v](const Quat& z) {
        std::array<double, 4> dg;
        double val = g(z, &dg);
        Quat s = exp_im(val * v);
        Quat vs = Quat(v) * s;
        std::array<Quat, 4> r;
        for (int i = 0; i < 4; ++i) r[i] = dg[i] * vs;
        return r;
    };
    t.kind = "bump";
    return t;
}

GaugeTransform GaugeTransform::product(const GaugeTransform& a, const GaugeTransform& b)
{
    GaugeTransform t;
    t.value = [a, b](const Quat& z) { return a.value(z) * b.value(z); };
    t.grad = [a, b](const Quat& z) {
        Quat va = a.value(z), vb = b.value(z);
        auto ga = a.grad(z), gb = b.grad(z);
        std::array<Quat, 4> r;
        for (int i = 0; i < 4; ++i) r[i] = ga[i] * vb + va * gb[i];
        return r;
    };
    t.kind = "product(" + a.kind + "," + b.kind + ")";
    return t;
}

GaugeTransform GaugeTransform::pulled(const GaugeTransform& t0, const ConformalMap& m)
{
    GaugeTransform t;
    t.value = [t0, m](const Quat& z) { return t0.value(m.apply(z)); };
    t.grad = [t0, m](const Quat& z) {
        auto J = m.jacobian(z);
        auto g = t0.grad(m.apply(z));
        std::array<Quat, 4> r{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) r[i] += J[k][i] * g[k];
        return r;
    };
    t.kind = "pulled(" + t0.kind + ")";
    return t;
}

// ---------------------------------------------------------------- closed forms

Form1 adhm_potential(const Quat& xi, double lambda, const Quat& z)
{
    Quat u = conj(z - xi);
    double d = norm2(z - xi) + lambda * lambda;
    Form1 g;
    for (int i = 0; i < 4; ++i) g[i] = im_part(u * basis(i)) / d;
    return g;
}

namespace {

FormJac adhm_jacobian(const Quat& xi, double lambda, const Quat& z)
{
    Quat u = z - xi;
    Quat ub = conj(u);
    double d = norm2(u) + lambda * lambda;
    FormJac J;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            J[i][j] = im_part(conj(basis(i)) * basis(j)) / d - im_part(ub * basis(j)) * (2.0 * u[i] / (d * d));
    return J;
}

} // namespace

Curv adhm_curvature(const Quat& xi, double lambda, const Quat& z)
{
    double d = norm2(z - xi) + lambda * lambda;
    double c = 2.0 * lambda * lambda / (d * d);
    Curv F;
    F.set(0, 1, {c, 0, 0});
    F.set(2, 3, {-c, 0, 0});
    F.set(0, 2, {0, c, 0});
    F.set(1, 3, {0, c, 0});
    F.set(0, 3, {0, 0, c});
    F.set(1, 2, {0, 0, -c});
    return F;
}

Curv radial_curvature(double f, double df, const Quat& z)
{
    Quat zb = conj(z);
    std::array<ImQ, 4> w;
    for (int i = 0; i < 4; ++i) w[i] = im_part(zb * basis(i));
    Curv F;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            ImQ v = 2.0 * df * (z[i] * w[j] - z[j] * w[i]) + 2.0 * f * im_part(conj(basis(i)) * basis(j)) +
                    f * f * bracket(w[i], w[j]);
            F.set(i, j, v);
        }
    return F;
}

Curv radial_curvature(const RadialProfile& p, const Quat& z)
{
    double s = norm2(z);
    return radial_curvature(p.f(s), p.df(s), z);
}

Curv curvature_from(const Form1& g, const FormJac& dg)
{
    Curv F;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) F.set(i, j, dg[i][j] - dg[j][i] + bracket(g[i], g[j]));
    return F;
}

Form1 conjugate_form(const Quat& s, const Form1& a)
{
    Form1 r;
    for (int i = 0; i < 4; ++i) r[i] = conjugate_by(s, a[i]);
    return r;
}

Curv conjugate_curv(const Quat& s, const Curv& F)
{
    Curv r;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, conjugate_by(s, F(i, j)));
    return r;
}

// ---------------------------------------------------------------- ConnectionModel

ModelPtr ConnectionModel::adhm(const Quat& xi, double lambda)
{
    if (!(lambda > 0)) throw std::invalid_argument("adhm: lambda must be positive");
    return std::make_shared<ConnectionModel>(AdhmData{xi, lambda});
}

ModelPtr ConnectionModel::radial(RadialProfile p) { return std::make_shared<ConnectionModel>(RadialData{std::move(p)}); }

ModelPtr ConnectionModel::flat()
{
    return radial(RadialProfile::from_function(4, [](double) { return 0.0; }, 0.0));
}

ModelPtr ConnectionModel::lattice(std::shared_ptr<const Lattice4D> lat, std::vector<Form1> gamma, int order)
{
    if (gamma.size() != lat->size()) throw std::invalid_argument("lattice model: field size mismatch");
    return std::make_shared<ConnectionModel>(LatticeData{std::move(lat), std::move(gamma), order});
}

ModelPtr ConnectionModel::sample(const ModelPtr& c, std::shared_ptr<const Lattice4D> lat, int order)
{
    std::vector<Form1> g(lat->size());
    for (std::size_t n = 0; n < lat->size(); ++n) g[n] = c->potential(lat->coord(n));
    return lattice(std::move(lat), std::move(g), order);
}

std::string ConnectionModel::kind() const
{
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AdhmData>) return "adhm";
            else if constexpr (std::is_same_v<T, RadialData>) return "radial";
            else if constexpr (std::is_same_v<T, LatticeData>) return "lattice";
            else if constexpr (std::is_same_v<T, GaugedData>) return "gauged(" + d.base->kind() + ")";
            else return "pulled(" + d.base->kind() + ")";
        },
        v_);
}

const LatticeData* ConnectionModel::lattice_data() const { return std::get_if<LatticeData>(&v_); }

namespace {

std::int32_t lattice_node(const LatticeData& d, const Quat& z)
{
    auto n = d.lattice->locate(z);
    if (n < 0) throw StencilOutOfDomain("lattice model evaluated off the lattice");
    return n;
}

FormJac lattice_jacobian(const LatticeData& d, std::int32_t n)
{
    const Lattice4D& L = *d.lattice;
    double h = L.h();
    FormJac J;
    for (int i = 0; i < 4; ++i) {
        auto p1 = L.neighbor(n, i, 1), m1 = L.neighbor(n, i, -1);
        if (p1 < 0 || m1 < 0) throw StencilOutOfDomain("lattice stencil leaves the stored nodes");
        if (d.order >= 4) {
            auto p2 = L.neighbor(n, i, 2), m2 = L.neighbor(n, i, -2);
            if (p2 < 0 || m2 < 0) throw StencilOutOfDomain("lattice stencil leaves the stored nodes");
            for (int j = 0; j < 4; ++j)
                J[i][j] = (8.0 * (d.gamma[p1][j] - d.gamma[m1][j]) - (d.gamma[p2][j] - d.gamma[m2][j])) / (12.0 * h);
        } else {
            for (int j = 0; j < 4; ++j) J[i][j] = (d.gamma[p1][j] - d.gamma[m1][j]) / (2.0 * h);
        }
    }
    return J;
}

FormJac fd_jacobian(const ConnectionModel& c, const Quat& z, double h)
{
    FormJac J;
    for (int i = 0; i < 4; ++i) {
        Quat e = basis(i) * h;
        Form1 p1 = c.potential(z + e), m1 = c.potential(z - e);
        Form1 p2 = c.potential(z + 2.0 * e), m2 = c.potential(z - 2.0 * e);
        for (int j = 0; j < 4; ++j) J[i][j] = (8.0 * (p1[j] - m1[j]) - (p2[j] - m2[j])) / (12.0 * h);
    }
    return J;
}

} // namespace

Form1 ConnectionModel::potential(const Quat& z) const
{
    return std::visit(
        [&](const auto& d) -> Form1 {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AdhmData>) {
                return adhm_potential(d.xi, d.lambda, z);
            } else if constexpr (std::is_same_v<T, RadialData>) {
                double f = d.profile.f(norm2(z));
                Quat zb = conj(z);
                Form1 g;
                for (int i = 0; i < 4; ++i) g[i] = f * im_part(zb * basis(i));
                return g;
            } else if constexpr (std::is_same_v<T, LatticeData>) {
                return d.gamma[lattice_node(d, z)];
            } else if constexpr (std::is_same_v<T, GaugedData>) {
                Quat s = d.t.value(z);
                auto ds = d.t.grad(z);
                Form1 b = d.base->potential(z);
                Quat si = conj(s);
                Form1 g;
                for (int i = 0; i < 4; ++i) g[i] = im_part(si * ds[i]) + conjugate_by(s, b[i]);
                return g;
            } else {
                auto J = d.m.jacobian(z);
                Form1 b = d.base->potential(d.m.apply(z));
                Form1 g{};
                for (int i = 0; i < 4; ++i)
                    for (int k = 0; k < 4; ++k) g[i] += J[k][i] * b[k];
                return g;
            }
        },
        v_);
}

FormJac ConnectionModel::potential_jacobian(const Quat& z) const
{
    if (auto* a = std::get_if<AdhmData>(&v_)) return adhm_jacobian(a->xi, a->lambda, z);
    if (auto* r = std::get_if<RadialData>(&v_)) {
        double s = norm2(z);
        double f = r->profile.f(s), df = r->profile.df(s);
        Quat zb = conj(z);
        FormJac J;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                J[i][j] = (2.0 * z[i] * df) * im_part(zb * basis(j)) + f * im_part(conj(basis(i)) * basis(j));
        return J;
    }
    if (auto* l = std::get_if<LatticeData>(&v_)) return lattice_jacobian(*l, lattice_node(*l, z));
    double scale = std::max(1.0, std::sqrt(norm2(z)));
    return fd_jacobian(*this, z, 1e-3 * scale);
}

Curv ConnectionModel::curvature(const Quat& z) const
{
    return std::visit(
        [&](const auto& d) -> Curv {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AdhmData>) {
                return adhm_curvature(d.xi, d.lambda, z);
            } else if constexpr (std::is_same_v<T, RadialData>) {
                return radial_curvature(d.profile, z);
            } else if constexpr (std::is_same_v<T, LatticeData>) {
                auto n = lattice_node(d, z);
                return curvature_from(d.gamma[n], lattice_jacobian(d, n));
            } else if constexpr (std::is_same_v<T, GaugedData>) {
                return conjugate_curv(d.t.value(z), d.base->curvature(z));
            } else {
                auto J = d.m.jacobian(z);
                Curv b = d.base->curvature(d.m.apply(z));
                Curv F;
                for (int i = 0; i < 4; ++i)
                    for (int j = i + 1; j < 4; ++j) {
                        ImQ v;
                        for (int k = 0; k < 4; ++k)
                            for (int l = 0; l < 4; ++l)
                                if (k != l) v += (J[k][i] * J[l][j]) * b(k, l);
                        F.set(i, j, v);
                    }
                return F;
            }
        },
        v_);
}

bool ConnectionModel::is_radial() const
{
    return std::visit(
        [](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AdhmData>) return norm2(d.xi) == 0.0;
            else if constexpr (std::is_same_v<T, RadialData>) return true;
            else if constexpr (std::is_same_v<T, PulledData>) return d.m.is_linear() && d.base->is_radial();
            else return false;
        },
        v_);
}

double ConnectionModel::radial_scale() const
{
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AdhmData>) return d.lambda;
            else if constexpr (std::is_same_v<T, PulledData>) return d.base->radial_scale() / d.m.lambda;
            else if constexpr (std::is_same_v<T, GaugedData>) return d.base->radial_scale();
            else return 1.0;
        },
        v_);
}

bool ConnectionModel::is_analytic() const
{
    return std::visit(
        [](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, LatticeData>) return false;
            else if constexpr (std::is_same_v<T, GaugedData> || std::is_same_v<T, PulledData>)
                return d.base->is_analytic();
            else return true;
        },
        v_);
}

Curv curvature_fd(const ConnectionModel& c, const Quat& z, double h, int order)
{
    Form1 g = c.potential(z);
    FormJac J;
    for (int i = 0; i < 4; ++i) {
        Quat e = basis(i) * h;
        Form1 p1 = c.potential(z + e), m1 = c.potential(z - e);
        if (order >= 4) {
            Form1 p2 = c.potential(z + 2.0 * e), m2 = c.potential(z - 2.0 * e);
            for (int j = 0; j < 4; ++j) J[i][j] = (8.0 * (p1[j] - m1[j]) - (p2[j] - m2[j])) / (12.0 * h);
        } else {
            for (int j = 0; j < 4; ++j) J[i][j] = (p1[j] - m1[j]) / (2.0 * h);
        }
    }
    return curvature_from(g, J);
}

ModelPtr gauge_act(const GaugeTransform& t, const ModelPtr& c)
{
    return std::make_shared<ConnectionModel>(GaugedData{c, t});
}

ModelPtr pullback(const ConformalMap& m, const ModelPtr& c)
{
    return std::make_shared<ConnectionModel>(PulledData{c, m});
}

} // namespace yma
