#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "yma/forms.hpp"
#include "yma/sphere.hpp"

namespace yma {

struct StencilOutOfDomain : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Profile of the symmetric ansatz A = f(|zeta|^2) Im(conj(zeta) dzeta).
// Stored as q = (1+s) f on Gauss-Legendre nodes in x = cos(theta) = (1-s)/(1+s), plus the
// north-pole value q(-1) (1 for charge-one data); evaluated by barycentric interpolation.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(int n, std::vector<double> q_nodes, double q_pole = 1.0);
    // Samples q = (1+s) f(s) at the nodes.
    static RadialProfile from_function(int n, const std::function<double(double)>& f, double q_pole = 1.0);
    // f = 1 / (s + lambda^2), the ADHM instanton centred at the origin.
    static RadialProfile adhm(int n, double lambda);

    int size() const { return static_cast<int>(x_.size()) - 1; }
    // interior node k = 0..n-1 (x ascending), stored after the pole entry
    double node_x(int k) const { return x_[k + 1]; }
    double node_s(int k) const { return (1.0 - x_[k + 1]) / (1.0 + x_[k + 1]); }
    double node_weight_x(int k) const { return wx_[k]; }
    double q(int k) const { return q_[k + 1]; }
    double q_pole() const { return q_[0]; }
    const std::vector<double>& q_all() const { return q_; }
    void set_q(int k, double v) { q_[k + 1] = v; }
    // D[k][m]: derivative at interior node k of the m-th cardinal function (m = 0 is the pole)
    const std::vector<std::vector<double>>& diff_matrix() const { return D_; }

    double q_at(double x) const;
    double dq_at(double x) const;
    double f(double s) const;
    double df(double s) const;

private:
    std::vector<double> x_;  // pole (-1) followed by GL nodes
    std::vector<double> wx_; // GL weights for interior nodes
    std::vector<double> bw_; // barycentric weights
    std::vector<double> q_;
    std::vector<std::vector<double>> D_;
    void init(int n);
    double q_u(double u) const; // q at x = u - 1
    double dq_u(double u) const;
};

// Pointwise unit-quaternion field with its chart gradient.
struct GaugeTransform {
    std::function<Quat(const Quat&)> value;
    std::function<std::array<Quat, 4>(const Quat&)> grad;
    std::string kind = "identity";

    static GaugeTransform identity();
    static GaugeTransform constant(const Quat& q);
    // exp(g(u) v), u = |zeta - c|^2 / rho^2, g = exp(1 - 1/(1-u)) inside the ball
    static GaugeTransform bump(const Quat& center, double rho, const ImQ& v);
    // pointwise product a * b
    static GaugeTransform product(const GaugeTransform& a, const GaugeTransform& b);
    // zeta -> t(phi(zeta))
    static GaugeTransform pulled(const GaugeTransform& t, const ConformalMap& m);
};

// Finite-difference orders and step used by generic evaluators.
struct FdSpec {
    double h = 1e-3;
    int order = 4;
};

class ConnectionModel;
using ModelPtr = std::shared_ptr<const ConnectionModel>;

struct AdhmData {
    Quat xi;
    double lambda = 1.0;
};
struct RadialData {
    RadialProfile profile;
};
struct LatticeData {
    std::shared_ptr<const Lattice4D> lattice;
    std::vector<Form1> gamma; // per storage node
    int order = 4;
};
struct GaugedData {
    ModelPtr base;
    GaugeTransform t;
};
struct PulledData {
    ModelPtr base;
    ConformalMap m;
};

class ConnectionModel {
public:
    using Variant = std::variant<AdhmData, RadialData, LatticeData, GaugedData, PulledData>;

    explicit ConnectionModel(Variant v) : v_(std::move(v)) {}

    static ModelPtr adhm(const Quat& xi, double lambda);
    static ModelPtr basic() { return adhm(Quat(0.0), 1.0); }
    static ModelPtr radial(RadialProfile p);
    static ModelPtr flat();
    static ModelPtr lattice(std::shared_ptr<const Lattice4D> lat, std::vector<Form1> gamma, int order = 4);
    // Samples c on every storage node of the lattice.
    static ModelPtr sample(const ModelPtr& c, std::shared_ptr<const Lattice4D> lat, int order = 4);

    const Variant& data() const { return v_; }
    std::string kind() const;

    Form1 potential(const Quat& z) const;
    // d_i Gamma_j: analytic where available, otherwise finite differences
    FormJac potential_jacobian(const Quat& z) const;
    Curv curvature(const Quat& z) const;

    // |F|_g depends on |zeta| only (radial quadrature applies)
    bool is_radial() const;
    // chart radius around which |F| varies
    double radial_scale() const;
    // closed-form evaluation at every chart point
    bool is_analytic() const;
    bool is_lattice() const { return std::holds_alternative<LatticeData>(v_); }
    const LatticeData* lattice_data() const;

private:
    Variant v_;
};

Form1 adhm_potential(const Quat& xi, double lambda, const Quat& z);
Curv adhm_curvature(const Quat& xi, double lambda, const Quat& z);
Curv radial_curvature(double f, double df, const Quat& z);
Curv radial_curvature(const RadialProfile& p, const Quat& z);

// F_ij = d_i G_j - d_j G_i + [G_i, G_j] by centred differences (order 2 or 4) of the potential.
Curv curvature_fd(const ConnectionModel& c, const Quat& z, double h, int order = 2);
// Curvature from a potential and its Jacobian.
Curv curvature_from(const Form1& g, const FormJac& dg);

ModelPtr gauge_act(const GaugeTransform& t, const ModelPtr& c);
ModelPtr pullback(const ConformalMap& m, const ModelPtr& c);

// Conjugation action on values: s^{-1} a s.
Form1 conjugate_form(const Quat& s, const Form1& a);
Curv conjugate_curv(const Quat& s, const Curv& F);

} // namespace yma
