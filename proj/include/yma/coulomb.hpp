#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "yma/lattice_ops.hpp"

namespace yma {

struct CoulombDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CoulombMaxOuter : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CgNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Second-order covariant derivative of the basic connection on 0-forms and its exact
// discrete adjoint, with Dirichlet sigma = 0 off the ball |zeta| <= R.
//   (D sigma)_i = (sigma(n+e_i) - sigma(n-e_i)) / 2h + [G_i, sigma]   on layers <= 1
//   D* = adjoint of D for sum w e^{-2phi} <.,.> (1-forms) and sum w <.,.> (0-forms)
// so that D*D is symmetric positive definite on ball nodes. D* approximates
// -e^{-2phi} (sum_i D_i Y_i + 2 phi_i Y_i).
class CoulombOperator {
public:
    explicit CoulombOperator(std::shared_ptr<const Lattice4D> L);

    const Lattice4D& lattice() const { return *L_; }
    std::shared_ptr<const Lattice4D> lattice_ptr() const { return L_; }
    const Field1& basic() const { return G_; }

    Field1 grad(const Field0& sigma) const;
    Field0 dstar(const Field1& Y) const;
    Field0 laplace(const Field0& sigma) const { return dstar(grad(sigma)); }
    double dot0(const Field0& a, const Field0& b) const;
    double norm0(const Field0& a) const;
    // varsigma[Gamma] with varsigma = exp(sigma): varsigma^{-1} d varsigma + varsigma^{-1} Gamma varsigma, layers <= 1
    Field1 gauge(const Field0& sigma, const Field1& Gamma) const;
    // ||D*(Gamma - G)|| on the ball
    double residual(const Field1& Gamma) const;

    // CG for D*D x = b; returns the iteration count
    int solve(const Field0& b, Field0& x, double abs_tol, int max_iter) const;

private:
    std::shared_ptr<const Lattice4D> L_;
    std::vector<std::int32_t> near_;           // layer <= 1
    std::vector<std::array<std::int32_t, 8>> nb_; // (+e_i, -e_i) per storage node, -1 if absent
    std::vector<double> w0_, w1_;             // w and w e^{-2phi}
    Field1 G_;
};

// D*_basic Upsilon on the ball (discrete adjoint form).
Field0 dstar_against_basic(const CoulombOperator& op, const Field1& Upsilon);
// e^{-sigma} Upsilon e^{sigma} pointwise (exact conjugation).
Field1 w_operator(const Field0& sigma, const Field1& Upsilon);

struct CoulombOptions {
    double tol = 1e-9;
    int max_outer = 40;
    double cg_rel = 1e-3;   // CG stops at max(cg_rel * ||rhs||, tol / 10)
    int cg_max = 20000;
    double damping = 1.0;   // halved on the first residual increase
};

struct CoulombResult {
    std::shared_ptr<const Lattice4D> lattice;
    Field0 sigma;
    Field1 projected; // valid on layers <= 1
    std::vector<double> residual;
    std::vector<int> cg_iters;
    std::vector<double> sigma_sup;
    double damping = 1.0;
    bool converged = false;
    bool support_ok = true; // Upsilon vanishes (to 1e-12) beyond 0.8 R
    double contraction = 0; // max ratio of successive residuals after the first step
};

CoulombResult coulomb_project(const CoulombOperator& op, const Field1& Gamma, const CoulombOptions& opt = {});
CoulombResult coulomb_project(const CoulombOperator& op, const ConnectionModel& c, const CoulombOptions& opt = {});
std::string coulomb_csv(const CoulombResult& r);

// Round L^2 distances of the projected connection from the basic one on the ball.
struct ProjectedDistance {
    double conn = 0, curv = 0;
};
// curv uses the model's curvature conjugated by varsigma (exact gauge covariance).
ProjectedDistance projected_distance(const CoulombOperator& op, const CoulombResult& r, const ConnectionModel& c);

// ||Pi[phi^* c] - phi^* Pi[c]|| for linear phi. The pulled-back problem is solved on the
// lattice scaled by 1/lambda so that phi maps its nodes onto the original nodes; the
// rotation part must map lattice nodes to lattice nodes (signed axis permutations).
struct CommuteReport {
    double diff = 0;
    double scale = 0; // ||Pi[c] - basic||
    double residual_a = 0, residual_b = 0;
};
CommuteReport commute_check(const ConnectionModel& c, const ConformalMap& m, double R, int n,
                            const CoulombOptions& opt = {});

struct BootstrapSample {
    double curv_dist = 0, conn_dist = 0, ratio = 0;
};
struct BootstrapReport {
    std::vector<BootstrapSample> samples;
    double C = 0;      // max ratio
    double spread = 0; // max / min ratio
};
BootstrapReport bootstrap(const CoulombOperator& op, const std::vector<ModelPtr>& family, const CoulombOptions& opt = {});

// Z(phi) = ||F_{Pi[phi^* c]} - F_basic||^2 + ||Pi[phi^* c] - basic||^2 on phi = (zeta -> lambda zeta + xi).
struct ZOptions {
    double lambda_max = 1.5;
    double xi_max = 0.5;
    double R = 3.0;
    int n = 17;
    int max_evals = 400;
    double x_tol = 1e-6; // simplex size in (log lambda, xi)
    CoulombOptions coulomb{1e-10, 40, 1e-3, 20000, 1.0};
};
struct ZProbe {
    double lambda = 1;
    Quat xi{0.0};
    double Z = 0;
    std::string note;
};
struct ZReport {
    ConformalMap best;
    double lambda = 1;
    Quat xi{0.0};
    double Z = 0;
    double Z_identity = 0;
    int evaluations = 0;
    std::vector<ZProbe> trace;
};
double z_value(const ConnectionModel& c, const ConformalMap& phi, const CoulombOperator& op,
               const CoulombOptions& opt = {});
ZReport minimize_conformal_distance(const ConnectionModel& c, const ZOptions& opt = {});

// Minimal Nelder-Mead on R^d.
struct NelderMeadResult {
    std::vector<double> x;
    double f = 0;
    int evaluations = 0;
};
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             double step, double x_tol, int max_evals);

} // namespace yma
