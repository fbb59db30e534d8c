#include "yma/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "yma/quadrature.hpp"

namespace yma {

namespace {

constexpr double kLambdaMax = 1e6;

void check_args(double alpha, double lambda)
{
    if (!(alpha >= 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in [1, 2]");
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (lambda > kLambdaMax || lambda < 1.0 / kLambdaMax)
        throw std::domain_error("lambda outside [1e-6, 1e6]; the profile integrands overflow");
}

// breakpoints on [a, b] with consecutive ratio at most 2 (a > 0)
void geometric_breaks(double a, double b, std::vector<double>& out)
{
    int n = std::max(1, static_cast<int>(std::ceil(std::log2(b / a))));
    for (int k = 0; k <= n; ++k) out.push_back(a * std::pow(b / a, static_cast<double>(k) / n));
}

// uniform breakpoints on [a, b] with panel length at most len
std::vector<double> uniform_breaks(double a, double b, double len)
{
    int n = std::max(1, static_cast<int>(std::ceil((b - a) / len)));
    std::vector<double> out;
    for (int k = 0; k <= n; ++k) out.push_back(a + (b - a) * k / n);
    return out;
}

// int_0^inf g(r) dr with panels refined geometrically around the scales 1/lambda, 1, lambda
Quad1D half_line(const std::function<double(double)>& g, double lambda, double rel_tol)
{
    double l = std::max(lambda, 1.0 / lambda);
    std::vector<double> inner{0.0};
    geometric_breaks(1.0 / l, 1.0, inner);
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    // r in [1, inf) via r = 1/u, u in (0, 1]
    auto tail = [&](double u) { return u > 0 ? g(1.0 / u) / (u * u) : 0.0; };
    auto a = integrate_doubling(g, inner, rel_tol, 16, 1024);
    auto b = integrate_doubling(tail, inner, rel_tol, 16, 1024);
    return {a.value + b.value, a.residual + b.residual};
}

double log_cosh(double x)
{
    x = std::fabs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - M_LN2;
}

double log_sinh(double x) // x > 0
{
    if (x < 1.0) return std::log(std::sinh(x));
    return x + std::log1p(-std::exp(-2.0 * x)) - M_LN2;
}

// cosh(tau) - cosh(t) = 2 sinh((tau+t)/2) sinh((tau-t)/2), in logs
double log_cdiff(double tau, double t) { return M_LN2 + log_sinh(0.5 * (tau + t)) + log_sinh(0.5 * (tau - t)); }

// G as a function of (alpha, tau); G = 1 for tau = 0
Quad1D G_tau(double alpha, double tau, double rel_tol)
{
    if (tau == 0.0) return {1.0, 0.0};
    tau = std::fabs(tau);
    double beta = alpha - 1.0;
    double lS3 = 3.0 * log_sinh(tau);
    auto f = [=](double t) {
        if (t >= tau) return 0.0;
        double lg = alpha * log_cosh(2.0 * t) + log_cosh(2.0 * beta * t) + log_cdiff(tau, t) - lS3;
        return 3.0 * std::exp(lg);
    };
    auto r = integrate_doubling(f, uniform_breaks(0.0, tau, 0.25), rel_tol, 16, 1024);
    if (!std::isfinite(r.value)) throw std::domain_error("G: integral overflows");
    return {r.value, r.residual};
}

Quad1D Gprime_tau(double alpha, double tau, double rel_tol)
{
    if (tau == 0.0) return {0.0, 0.0};
    tau = std::fabs(tau);
    double beta = alpha - 1.0;
    double C = std::cosh(tau);
    double lS4 = 4.0 * log_sinh(tau);
    auto f = [=](double t) {
        if (t <= 0.0 || t >= tau) return 0.0;
        double lg = (beta - 1.0) * log_cosh(2.0 * t) + log_sinh(2.0 * alpha * t) + log_sinh(t) + log_cdiff(tau, t) +
                    std::log(2.0 * C * std::cosh(t) - 1.0) - lS4;
        return 6.0 * std::exp(lg);
    };
    auto r = integrate_doubling(f, uniform_breaks(0.0, tau, 0.25), rel_tol, 16, 1024);
    return {r.value, r.residual};
}

} // namespace

Quad1D pullback_energy(double alpha, double lambda, ProfileRoute route, double rel_tol)
{
    check_args(alpha, lambda);
    const double E0 = basic_energy(alpha);
    switch (route) {
    case ProfileRoute::Radial: {
        // 16 pi^2 3^alpha int (1 + 1/chi)^alpha r^3 / (1+r^2)^4 dr
        auto g = [=](double r) {
            double s = r * r;
            double ichi = 1.0 / chi_lambda(Quat(r), lambda);
            double t = 1.0 + s;
            return std::pow(1.0 + ichi, alpha) * r * s / (t * t * t * t);
        };
        auto q = half_line(g, lambda, rel_tol);
        double c = 16.0 * M_PI * M_PI * std::pow(3.0, alpha);
        return {c * q.value, c * q.residual};
    }
    case ProfileRoute::WSubstitution: {
        double tau = std::fabs(std::log(lambda));
        if (tau == 0.0) return {E0, 0.0};
        double l = std::exp(tau);
        // w = e^u on [-tau, tau]; (l - w)(w - 1/l) / w^3 written with expm1 against cancellation
        auto f = [=](double u) {
            double w = std::exp(u);
            double a = -l * std::expm1(u - tau);
            double b = std::exp(-tau) * std::expm1(u + tau);
            return std::pow(1.0 + w * w * w * w, alpha) * a * b / (w * w * w);
        };
        auto r = integrate_doubling(f, uniform_breaks(-tau, tau, 0.25), rel_tol, 16, 1024);
        double d = l - 1.0 / l;
        double c = 24.0 * M_PI * M_PI * std::pow(3.0, alpha - 1.0) / (d * d * d);
        return {c * r.value, c * r.residual};
    }
    case ProfileRoute::Hyperbolic: {
        auto g = G_tau(alpha, std::log(lambda), rel_tol);
        return {E0 * g.value, E0 * g.residual};
    }
    }
    throw std::invalid_argument("unknown route");
}

Quad1D G_of_sigma(double sigma, double beta, double rel_tol)
{
    if (sigma < 0) throw std::invalid_argument("G_of_sigma: sigma must be >= 0");
    if (sigma == 0.0) return {1.0, 0.0};
    if (!(beta > 0 && beta <= 1)) throw std::invalid_argument("G_of_sigma: beta must lie in (0, 1]");
    double tau = sigma / beta;
    return G_tau(1.0 + beta, tau, rel_tol);
}

Quad1D G_prime(double sigma, double beta, double rel_tol)
{
    if (sigma < 0) throw std::invalid_argument("G_prime: sigma must be >= 0");
    if (sigma == 0.0) return {0.0, 0.0};
    if (!(beta > 0 && beta <= 1)) throw std::invalid_argument("G_prime: beta must lie in (0, 1]");
    double tau = sigma / beta;
    return Gprime_tau(1.0 + beta, tau, rel_tol);
}

Quad1D gap(double alpha, double lambda, double rel_tol)
{
    check_args(alpha, lambda);
    auto g = G_tau(alpha, std::log(lambda), rel_tol);
    double E0 = basic_energy(alpha);
    return {E0 * (g.value - 1.0), E0 * g.residual};
}

Quad1D dE_dloglambda_basic(double alpha, double lambda, double rel_tol)
{
    check_args(alpha, lambda);
    double tau = std::log(lambda);
    auto g = Gprime_tau(alpha, tau, rel_tol);
    double c = basic_energy(alpha) * (alpha - 1.0) * (tau < 0 ? -1.0 : 1.0);
    return {c * g.value, std::fabs(c) * g.residual};
}

Integral dE_dloglambda_general(const ConnectionModel& c, double alpha, double lambda, const QuadOptions& opt)
{
    if (alpha < 1.0) throw std::invalid_argument("dE_dloglambda: alpha must be >= 1");
    if (!(lambda > 0)) throw std::invalid_argument("dE_dloglambda: lambda must be positive");
    return integrate_density(
        c,
        [alpha, lambda](const Curv& F, const Quat& z) {
            double chi = chi_lambda(z, lambda);
            double f2 = norm2_g(F, z);
            return 2.0 * std::pow(3.0 + chi * f2, alpha - 1.0) * ((alpha - 1.0) * f2 - 3.0 / chi) * mu(lambda * z);
        },
        opt, {1.0 / lambda});
}

ProfilePoint profile_point(double alpha, double lambda)
{
    check_args(alpha, lambda);
    ProfilePoint p;
    p.alpha = alpha;
    p.lambda = lambda;
    p.tau = std::log(lambda);
    p.beta = alpha - 1.0;
    p.sigma = p.beta * p.tau;
    auto g = G_tau(alpha, p.tau, 1e-14);
    auto gp = Gprime_tau(alpha, p.tau, 1e-14);
    double E0 = basic_energy(alpha);
    p.G = g.value;
    p.Gprime = gp.value;
    p.gap = E0 * (g.value - 1.0);
    p.dE = E0 * p.beta * gp.value * (p.tau < 0 ? -1.0 : 1.0);
    p.residual = std::max(E0 * g.residual, E0 * p.beta * gp.residual);
    return p;
}

std::string profile_csv(const std::vector<ProfilePoint>& pts)
{
    std::ostringstream os;
    os << "alpha,lambda,tau,sigma,G,Gprime,gap,dE_dloglog,residual\n";
    os << std::setprecision(17);
    for (const auto& p : pts)
        os << p.alpha << ',' << p.lambda << ',' << p.tau << ',' << p.sigma << ',' << p.G << ',' << p.Gprime << ','
           << p.gap << ',' << p.dE << ',' << p.residual << '\n';
    return os.str();
}

int gap_regime(double alpha, double lambda)
{
    double t = std::log(lambda);
    if (!(t > 0)) throw std::invalid_argument("gap_regime: lambda must exceed 1");
    if (t <= 1.0) return 3;
    if ((alpha - 1.0) * t >= 5.0) return 1;
    if ((alpha - 1.0) * t <= 5.0) return 2;
    throw std::invalid_argument("gap_regime: sample fits no regime");
}

GapFit verify_gap_bounds(const std::vector<GapSample>& samples)
{
    GapFit fit;
    const double inf = std::numeric_limits<double>::infinity();
    double C[3] = {inf, inf, inf};
    double Cd = inf;
    for (const auto& s : samples) {
        int r = gap_regime(s.alpha, s.lambda);
        auto p = profile_point(s.alpha, s.lambda);
        double beta = s.alpha - 1.0, t = p.tau;
        double bound = r == 1 ? std::pow(s.lambda, 4.0 * beta) : r == 2 ? beta * t : beta * t * t;
        C[r - 1] = std::min(C[r - 1], p.gap / bound);
        fit.count[r - 1]++;
        Cd = std::min(Cd, p.dE / (beta * t / (1.0 + t)));
    }
    bool ok = !samples.empty();
    for (int r = 0; r < 3; ++r) {
        fit.C[r] = fit.count[r] ? C[r] : 0.0;
        ok = ok && fit.count[r] > 0 && fit.C[r] > 0 && std::isfinite(fit.C[r]);
    }
    fit.C_derivative = samples.empty() ? 0.0 : Cd;
    fit.pass = ok && fit.C_derivative > 0 && std::isfinite(fit.C_derivative);
    return fit;
}

namespace {

// int over [0,2pi]x[0,pi]x[0,pi] of (1 + sin^2 t1 + sin^2 t1 sin^2 t2)^2
double angular_factor()
{
    const GaussRule& g = gauss_legendre(32);
    double s = 0;
    for (int a = 0; a < 32; ++a) {
        double t1 = 0.5 * M_PI * (g.x[a] + 1.0);
        for (int b = 0; b < 32; ++b) {
            double t2 = 0.5 * M_PI * (g.x[b] + 1.0);
            double s1 = std::sin(t1), s2 = std::sin(t2);
            double v = 1.0 + s1 * s1 + s1 * s1 * s2 * s2;
            s += 0.25 * M_PI * M_PI * g.w[a] * g.w[b] * v * v;
        }
    }
    return 2.0 * M_PI * s;
}

} // namespace

ChiNormReport chi_sobolev_norms(double lambda)
{
    if (!(lambda >= 1.0)) throw std::invalid_argument("chi_sobolev_norms: lambda must be >= 1");
    if (lambda > kLambdaMax) throw std::domain_error("chi_sobolev_norms: lambda exceeds the overflow guard");
    ChiNormReport rep;
    rep.lambda = lambda;
    double l2 = lambda * lambda;
    double a = (lambda - 1.0) / lambda, b = (lambda + 1.0) / lambda;
    rep.grad2_closed = 128.0 / 3.0 * std::pow(M_PI, 3) * a * a * b * b;
    if (lambda == 1.0) return rep;
    const double tol = 1e-13;
    const double ang = 2.0 * std::pow(M_PI, 3); // the weight used for the radial-only integrands

    auto d1 = [=](double r) { return 8.0 * r * (l2 - 1.0) / ((1.0 + l2 * r * r) * (1.0 + r * r)); };
    auto d2 = [=](double r) {
        double s = r * r;
        double p = 1.0 + s, q = 1.0 + l2 * s;
        return -8.0 * (l2 - 1.0) * (3.0 * l2 * s * s + (l2 + 1.0) * s - 1.0) / (p * p * q * q);
    };
    auto g1 = [&](double r) {
        double p = 1.0 + r * r, v = d1(r);
        return r * r * r / (p * p) * v * v;
    };
    auto g2 = [&](double r) {
        double p = 1.0 + r * r, v = d2(r);
        return r * r * r / (p * p * p * p) * v * v;
    };
    auto g3 = [=](double r) {
        double p = 1.0 + r * r, q = 1.0 + l2 * r * r;
        double r9 = std::pow(r, 9);
        return 64.0 * (l2 - 1.0) * (l2 - 1.0) * r9 / (std::pow(p, 6) * q * q);
    };
    auto q1 = half_line(g1, lambda, tol);
    auto q2 = half_line(g2, lambda, tol);
    auto q3 = half_line(g3, lambda, tol);
    double A = angular_factor();
    rep.grad = std::sqrt(ang * q1.value);
    rep.hess_rr = std::sqrt(ang * q2.value);
    rep.hess_gamma = std::sqrt(A * q3.value);
    rep.hess = std::hypot(rep.hess_rr, rep.hess_gamma);
    rep.residual = ang * (q1.residual + q2.residual) + A * q3.residual;
    return rep;
}

ChiFit fit_chi_bounds(const std::vector<double>& lambdas)
{
    ChiFit fit;
    int n_log = 0, n_sqrt = 0;
    for (double l : lambdas) {
        if (!(l > 1.0)) continue;
        auto r = chi_sobolev_norms(l);
        double t = std::log(l), v = r.grad + r.hess;
        if (l <= M_E) {
            fit.C_log = std::max(fit.C_log, v / t);
            ++n_log;
        }
        if (l >= M_E) {
            fit.C_sqrt = std::max(fit.C_sqrt, v / std::sqrt(t));
            ++n_sqrt;
        }
    }
    fit.pass = n_log > 0 && n_sqrt > 0 && std::isfinite(fit.C_log) && std::isfinite(fit.C_sqrt) && fit.C_log > 0 &&
               fit.C_sqrt > 0;
    return fit;
}

DerivGapFit derivative_gap_fit(const ConnectionModel& c, double alpha, double lambda, const QuadOptions& opt)
{
    auto basic = ConnectionModel::basic();
    DerivGapFit f;
    f.lhs = dE_dloglambda_general(*basic, alpha, lambda, opt).value - dE_dloglambda_general(c, alpha, lambda, opt).value;
    double beta = alpha - 1.0;
    double p = 2.0 * alpha + 2.0;
    double k = 1.0 + std::pow(lambda, 4.0 * beta);
    double d2 = lp_difference_norm(*basic, c, 2.0, opt);
    double dp = lp_difference_norm(*basic, c, p, opt);
    double b2 = lp_curvature_norm(*basic, 2.0, opt), c2 = lp_curvature_norm(c, 2.0, opt);
    double bp = lp_curvature_norm(*basic, p, opt), cp = lp_curvature_norm(c, p, opt);
    f.bound1 = beta * k * d2 * (b2 + c2);
    f.bound2 = beta * beta * k * (bp + cp) * dp * std::pow(cp, 2.0 * alpha);
    double den = f.bound1 + f.bound2;
    f.C = den > 0 ? std::fabs(f.lhs) / den : (f.lhs == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    return f;
}

} // namespace yma
