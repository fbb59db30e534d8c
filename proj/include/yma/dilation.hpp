#pragma once

#include <string>
#include <vector>

#include "yma/energy.hpp"

namespace yma {

// Energy of the dilated basic connection lambda*, and the one-dimensional integrals
// describing how it grows with lambda.

enum class ProfileRoute { Radial, WSubstitution, Hyperbolic };

struct Quad1D {
    double value = 0;
    double residual = 0;
};

// YM_alpha(lambda* basic)
Quad1D pullback_energy(double alpha, double lambda, ProfileRoute route, double rel_tol = 1e-14);

// G(sigma; beta) with alpha = 1 + beta and log lambda = sigma / beta; G(0) = 1.
Quad1D G_of_sigma(double sigma, double beta, double rel_tol = 1e-14);
// dG/dsigma from the integrated-by-parts form.
Quad1D G_prime(double sigma, double beta, double rel_tol = 1e-14);
// YM_alpha(lambda* basic) - 6^alpha (4/3) pi^2
Quad1D gap(double alpha, double lambda, double rel_tol = 1e-14);

// d/dlog(lambda) of YM_{alpha,lambda}(basic) through G'.
Quad1D dE_dloglambda_basic(double alpha, double lambda, double rel_tol = 1e-14);
// d/dlog(lambda) of YM_{alpha,lambda}(c) as the mu(lambda zeta)-weighted integral.
Integral dE_dloglambda_general(const ConnectionModel& c, double alpha, double lambda, const QuadOptions& opt = {});

struct ProfilePoint {
    double alpha = 1, lambda = 1, tau = 0, beta = 0, sigma = 0;
    double G = 1, Gprime = 0, gap = 0, dE = 0;
    double residual = 0; // largest quadrature residual among the columns
};
ProfilePoint profile_point(double alpha, double lambda);
std::string profile_csv(const std::vector<ProfilePoint>& pts);

struct GapSample {
    double alpha, lambda;
};
struct GapFit {
    // regime 1: (alpha-1) log lambda >= 5; 2: log lambda >= 1 and (alpha-1) log lambda <= 5; 3: log lambda <= 1
    double C[3] = {0, 0, 0};
    int count[3] = {0, 0, 0};
    double C_derivative = 0; // dE/dloglambda >= C (alpha-1) log lambda / (1 + log lambda)
    bool pass = false;
};
// Regime of a sample, 1..3; throws std::invalid_argument when none applies.
int gap_regime(double alpha, double lambda);
GapFit verify_gap_bounds(const std::vector<GapSample>& samples);

struct ChiNormReport {
    double lambda = 1;
    double grad = 0;        // ||d_r log chi||
    double hess_rr = 0;     // ||d_r^2 log chi||
    double hess_gamma = 0;  // ||Gamma^r d_r log chi||
    double hess = 0;        // sqrt(hess_rr^2 + hess_gamma^2)
    double grad2_closed = 0; // (2^7/3) pi^3 ((l-1)/l)^2 ((l+1)/l)^2
    double residual = 0;
};
ChiNormReport chi_sobolev_norms(double lambda);

struct ChiFit {
    double C_log = 0;  // (grad + hess) <= C log lambda on (1, e]
    double C_sqrt = 0; // (grad + hess) <= C sqrt(log lambda) on [e, inf)
    bool pass = false;
};
ChiFit fit_chi_bounds(const std::vector<double>& lambdas);

// Fitted constant of the derivative-gap inequality for a perturbation of the basic connection.
struct DerivGapFit {
    double lhs = 0;     // dE(basic) - dE(c), both at (alpha, lambda)
    double bound1 = 0;  // (alpha-1)(1+lambda^{4(alpha-1)}) ||dF||_2 (||F~||_2 + ||F||_2)
    double bound2 = 0;  // (alpha-1)^2 (1+lambda^{4(alpha-1)}) (||F~||_p + ||F||_p) ||dF||_p ||F||_p^{2 alpha}
    double C = 0;       // |lhs| / (bound1 + bound2)
};
DerivGapFit derivative_gap_fit(const ConnectionModel& c, double alpha, double lambda, const QuadOptions& opt = {});

} // namespace yma
