#pragma once

#include <string>
#include <vector>

#include "yma/lattice_ops.hpp"
#include "yma/rng.hpp"

namespace yma {

// Conventions: D*F_j = -2 e^{-2phi} sum_i D_i F_ij (the adjoint of D for the full double-sum
// norm, so that Grad YM = D*F), written in chart components.

// Pointwise, by fourth-order differences of the curvature with step h.
Form1 dstar_F(const ConnectionModel& c, const Quat& z, double h = 1e-3);

struct GradientParts {
    Form1 dstarF{}, theta1{}, theta2{}, total{};
};
GradientParts gradient_ym_alpha_lambda(const ConnectionModel& c, double alpha, double lambda, const Quat& z,
                                       double h = 1e-3);

struct GradientField {
    Field1 dstarF, theta1, theta2, total; // valid on the ball
};
// Lattice version from a potential field; curvature by stencils.
GradientField gradient_lattice(const Stencil& S, const Field1& G, double alpha, double lambda);
Field1 dstar_F_lattice(const Stencil& S, const Field1& G);

// sum over ball nodes of w (3 + chi |F_h|^2)^alpha / (2 chi)
double discrete_energy(const Stencil& S, const Field1& G, double alpha, double lambda);
// Exact derivative of discrete_energy, divided by the node L^2 weight so it approximates Grad.
Field1 discrete_energy_gradient(const Stencil& S, const Field1& G, double alpha, double lambda);

// D* on 1-forms: -e^{-2phi} (sum_i D_i Xi_i + 2 sum_i phi_i Xi_i), valid at layer <= depth(1).
Field0 dstar_1form(const Stencil& S, const Field1& G, const Field1& Xi);

// e^{-2phi} sum_k (D_k (D Xi)_ki - [F_ki, Xi_k]), on the ball.
Field1 jacobi_apply(const Stencil& S, const Field1& G, const Field2& F, const Field1& Xi);
// Delta Xi + D D* Xi - 3 Xi - 2 e^{-2phi} sum_k [F_ki, Xi_k] with the rough Laplacian.
Field1 jacobi_bochner(const Stencil& S, const Field1& G, const Field2& F, const Field1& Xi);

struct ModuliBasis {
    std::shared_ptr<const Lattice4D> lattice;
    std::vector<Field1> b;
    std::vector<std::string> names;
};
// Interior products of the basic curvature with the round gradients of the five ambient
// coordinates (dilation, four translations), Gram-Schmidt orthonormalised on the ball.
ModuliBasis moduli_basis(std::shared_ptr<const Lattice4D> L);
std::vector<std::vector<double>> gram_matrix(const ModuliBasis& B);
Field1 kernel_project(const Field1& Xi, const ModuliBasis& B);

struct PolarizationResiduals {
    double F = 0;     // sup |F_1 - F_2 - (D_2 Y + [Y ^ Y])|
    double dstarF = 0; // sup |D*_1 F_1 - D*_2 F_2 - D*_2(D_2 Y + [Y ^ Y]) + 2 e^{-2phi} sum_i [Y_i, F_1,ij]|
};
// Left sides from the models' curvature (analytic where available); right sides from
// the lattice: potential Jacobians when analytic_jacobian, stencils otherwise.
PolarizationResiduals polarization_residuals(const ConnectionModel& c1, const ConnectionModel& c2, const Stencil& S,
                                             double radius, bool analytic_jacobian);

// Pointwise margins against the basic curvature at z; both must be <= 0.
double commutator_margin_A(const Quat& z, const Form1& A);
double commutator_margin_B(const Quat& z, const FormJac& B);
struct CommutatorCheck {
    double A = -1e300, B = -1e300;
    int draws = 0;
};
CommutatorCheck commutator_bound_check(Rng& rng, int draws);

// Smooth bump 1-form v * exp(1 - 1/(1-u)), u = |zeta - c|^2 / rho^2.
Field1 bump_form(const Lattice4D& L, const Quat& center, double rho, const Form1& v);

struct PoincareRatios {
    double r1 = 0; // ||A|| / ||nabla A||
    double r2 = 0; // ||nabla A|| / ||nabla^2 A||
};
// Covariant derivatives of the basic connection coupled to Levi-Civita; throws on A = 0.
PoincareRatios poincare_ratio(const Stencil& S, const Field1& G, const Field1& A);

// max over (centre, radius) of (rho^{-lam} int_{B_rho} |u|^p dV)^{1/p} with geodesic balls.
double morrey_norm(const Lattice4D& L, const Scalar& u_abs, double p, double lam_exp, const std::vector<Quat>& centers,
                   const std::vector<double>& radii);

// Geodesic distance on the round S^4 between chart points.
double geodesic_distance(const Quat& a, const Quat& b);

} // namespace yma
