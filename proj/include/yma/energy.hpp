#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "yma/gauge.hpp"

namespace yma {

struct QuadratureNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnergyReport {
    double value = 0;
    double alpha = 1;
    double lambda = 1;
    double residual = 0;
    std::string grid;
};

enum class Route { Auto, Radial, Sphere, Lattice };

struct QuadOptions {
    double rel_tol = 1e-13;    // doubling stops once successive values agree to this
    double require = 0;        // if > 0, throw QuadratureNotConverged when residual exceeds it
    int radial_n0 = 16;
    int radial_nmax = 512;
    std::vector<int> sphere_levels{16, 24, 32, 48};
    Route route = Route::Auto;
    std::shared_ptr<const Lattice4D> lattice; // for the lattice route of analytic models
};

// tr(ab) = kTracePairing <a, b> for a, b in Im H viewed in su(2).
inline constexpr double kTracePairing = -2.0;

using Density = std::function<double(const Curv& F, const Quat& z)>;

struct Integral {
    double value = 0;
    double residual = 0;
    std::string grid;
};

Route choose_route(const ConnectionModel& c, const QuadOptions& opt);
// Integral over S^4 of density(F(z), z) dV_g.
Integral integrate_density(const ConnectionModel& c, const Density& density, const QuadOptions& opt = {},
                           const std::vector<double>& extra_scales = {});
// Same for a density depending on two connections at the same point.
Integral integrate_pair(const ConnectionModel& a, const ConnectionModel& b,
                        const std::function<double(const Curv&, const Curv&, const Quat&)>& density,
                        const QuadOptions& opt = {});

EnergyReport ym_energy(const ConnectionModel& c, const QuadOptions& opt = {});
EnergyReport ym_alpha(const ConnectionModel& c, double alpha, const QuadOptions& opt = {});
EnergyReport ym_alpha_lambda(const ConnectionModel& c, double alpha, double lambda, const QuadOptions& opt = {});

// Several alphas with one set of curvature samples.
std::vector<EnergyReport> ym_alpha_many(const ConnectionModel& c, const std::vector<double>& alphas,
                                        const QuadOptions& opt = {});

// Density of the charge: (|F^-|^2_g - |F^+|^2_g) / 8 pi^2 per unit round volume.
double charge_density(const Curv& F, const Quat& z);
// Density of (1/8 pi^2) tr(F ^ F) per unit round volume via the trace pairing.
double wedge_trace_density(const Curv& F, const Quat& z);

struct ChargeReport {
    double value = 0;
    double residual = 0;
    double wedge_value = 0;
    std::string grid;
};
ChargeReport topological_charge_report(const ConnectionModel& c, const QuadOptions& opt = {});
inline double topological_charge(const ConnectionModel& c, const QuadOptions& opt = {})
{
    return topological_charge_report(c, opt).value;
}

double lp_curvature_norm(const ConnectionModel& c, double p, const QuadOptions& opt = {});
double lp_difference_norm(const ConnectionModel& c1, const ConnectionModel& c2, double p, const QuadOptions& opt = {});
// L^2 norm of the self-dual part.
double self_dual_norm(const ConnectionModel& c, const QuadOptions& opt = {});

// 6^alpha (4/3) pi^2
inline double basic_energy(double alpha) { return std::pow(6.0, alpha) * 4.0 / 3.0 * M_PI * M_PI; }

std::string to_json(const EnergyReport& r);

} // namespace yma
