#include "yma/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "yma/quadrature.hpp"

namespace yma {

namespace {

std::vector<double> merged_breaks(const std::vector<double>& scales)
{
    std::vector<double> b;
    for (double s : scales) {
        auto v = radial_breaks(s);
        b.insert(b.end(), v.begin(), v.end());
    }
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double x : b)
        if (out.empty() || x - out.back() > 1e-6) out.push_back(x);
    return out;
}

struct SphereNodes {
    std::vector<Quat> dir; // unit directions
    std::vector<double> w; // S^3 weights
};

SphereNodes sphere_nodes(int n)
{
    const GaussRule& g = gauss_legendre(n);
    SphereNodes s;
    int nphi = 2 * n;
    for (int a = 0; a < n; ++a) {
        double psi = 0.5 * M_PI * (g.x[a] + 1.0);
        double wpsi = 0.5 * M_PI * g.w[a] * std::sin(psi) * std::sin(psi);
        for (int b = 0; b < n; ++b) {
            double cchi = g.x[b];
            double schi = std::sqrt(1.0 - cchi * cchi);
            for (int c = 0; c < nphi; ++c) {
                double phi = 2.0 * M_PI * c / nphi;
                s.dir.push_back({std::cos(psi), std::sin(psi) * cchi, std::sin(psi) * schi * std::cos(phi),
                                 std::sin(psi) * schi * std::sin(phi)});
                s.w.push_back(wpsi * g.w[b] * 2.0 * M_PI / nphi);
            }
        }
    }
    return s;
}

template <class Eval>
double sphere_sum(int n, const Eval& eval)
{
    const GaussRule& g = gauss_legendre(n);
    SphereNodes s = sphere_nodes(n);
    std::vector<double> slices(n), terms(s.w.size());
    for (int k = 0; k < n; ++k) {
        double th = 0.5 * M_PI * (g.x[k] + 1.0);
        double wt = 0.5 * M_PI * g.w[k] * std::pow(std::sin(th), 3);
        double r = std::tan(0.5 * th);
        for (std::size_t d = 0; d < s.w.size(); ++d) terms[d] = s.w[d] * eval(r * s.dir[d]);
        slices[k] = wt * pairwise_sum(terms);
    }
    return pairwise_sum(slices);
}

template <class Eval>
Integral radial_integral(const Eval& eval, const std::vector<double>& scales, const QuadOptions& opt)
{
    auto breaks = merged_breaks(scales);
    auto f = [&](double th) {
        double r = std::tan(0.5 * th);
        double s = std::sin(th);
        return 2.0 * M_PI * M_PI * s * s * s * eval(Quat(r, 0, 0, 0));
    };
    auto res = integrate_doubling(f, breaks, opt.rel_tol, opt.radial_n0, opt.radial_nmax);
    Integral out;
    out.value = res.value;
    out.residual = res.residual;
    std::ostringstream os;
    os << "radial panels=" << breaks.size() - 1 << " nodes=" << res.nodes;
    out.grid = os.str();
    return out;
}

template <class Eval>
Integral sphere_integral(const Eval& eval, const QuadOptions& opt)
{
    Integral out;
    const auto& lv = opt.sphere_levels;
    double prev = sphere_sum(lv.front(), eval);
    std::size_t k = 1;
    for (; k < lv.size(); ++k) {
        double cur = sphere_sum(lv[k], eval);
        out.value = cur;
        out.residual = std::fabs(cur - prev);
        if (out.residual <= opt.rel_tol * std::fabs(cur)) break;
        prev = cur;
    }
    if (lv.size() == 1) out.value = prev;
    std::ostringstream os;
    os << "sphere n=" << lv[std::min(k, lv.size() - 1)];
    out.grid = os.str();
    return out;
}

template <class Eval>
Integral lattice_integral(const Lattice4D& L, const Eval& eval)
{
    const auto& ball = L.ball_nodes();
    std::vector<double> fine(ball.size()), coarse;
    int c0 = L.pad() + (L.n_axis() - 1) / 2;
    for (std::size_t k = 0; k < ball.size(); ++k) {
        auto n = ball[k];
        double v = L.weight(n) * eval(L.coord(n));
        fine[k] = v;
        auto idx = L.index(n);
        bool even = true;
        for (int a = 0; a < 4; ++a) even = even && ((idx[a] - c0) % 2 == 0);
        if (even) coarse.push_back(16.0 * v);
    }
    Integral out;
    out.value = pairwise_sum(fine);
    out.residual = std::fabs(out.value - pairwise_sum(coarse));
    out.grid = L.describe();
    return out;
}

void check_required(const Integral& r, const QuadOptions& opt, const char* what)
{
    if (opt.require > 0 && !(r.residual <= opt.require * std::max(1.0, std::fabs(r.value)))) {
        std::ostringstream os;
        os << what << ": quadrature residual " << r.residual << " exceeds requested " << opt.require;
        throw QuadratureNotConverged(os.str());
    }
}

} // namespace

Route choose_route(const ConnectionModel& c, const QuadOptions& opt)
{
    if (opt.route != Route::Auto) return opt.route;
    if (c.is_lattice() || (!c.is_analytic())) return Route::Lattice;
    if (c.is_radial()) return Route::Radial;
    return Route::Sphere;
}

Integral integrate_density(const ConnectionModel& c, const Density& density, const QuadOptions& opt,
                           const std::vector<double>& extra_scales)
{
    Route route = choose_route(c, opt);
    auto eval = [&](const Quat& z) { return density(c.curvature(z), z); };
    if (route == Route::Radial) {
        std::vector<double> scales{1.0, c.radial_scale()};
        scales.insert(scales.end(), extra_scales.begin(), extra_scales.end());
        return radial_integral(eval, scales, opt);
    }
    if (route == Route::Sphere) return sphere_integral(eval, opt);
    std::shared_ptr<const Lattice4D> L = opt.lattice;
    if (auto* d = c.lattice_data()) L = d->lattice;
    if (!L) throw std::invalid_argument("lattice route needs a lattice");
    return lattice_integral(*L, eval);
}

Integral integrate_pair(const ConnectionModel& a, const ConnectionModel& b,
                        const std::function<double(const Curv&, const Curv&, const Quat&)>& density,
                        const QuadOptions& opt)
{
    auto eval = [&](const Quat& z) { return density(a.curvature(z), b.curvature(z), z); };
    Route ra = choose_route(a, opt), rb = choose_route(b, opt);
    if (ra == Route::Radial && rb == Route::Radial)
        return radial_integral(eval, {1.0, a.radial_scale(), b.radial_scale()}, opt);
    if (ra != Route::Lattice && rb != Route::Lattice) return sphere_integral(eval, opt);
    std::shared_ptr<const Lattice4D> L = opt.lattice;
    if (auto* d = a.lattice_data()) L = d->lattice;
    if (auto* d = b.lattice_data()) L = d->lattice;
    if (!L) throw std::invalid_argument("lattice route needs a lattice");
    return lattice_integral(*L, eval);
}

EnergyReport ym_energy(const ConnectionModel& c, const QuadOptions& opt)
{
    auto r = integrate_density(c, [](const Curv& F, const Quat& z) { return 0.5 * norm2_g(F, z); }, opt);
    check_required(r, opt, "ym_energy");
    return {r.value, 1.0, 1.0, r.residual, r.grid};
}

EnergyReport ym_alpha(const ConnectionModel& c, double alpha, const QuadOptions& opt)
{
    if (alpha < 1.0) throw std::invalid_argument("ym_alpha: alpha must be >= 1");
    auto r = integrate_density(
        c, [alpha](const Curv& F, const Quat& z) { return 0.5 * std::pow(3.0 + norm2_g(F, z), alpha); }, opt);
    check_required(r, opt, "ym_alpha");
    return {r.value, alpha, 1.0, r.residual, r.grid};
}

EnergyReport ym_alpha_lambda(const ConnectionModel& c, double alpha, double lambda, const QuadOptions& opt)
{
    if (alpha < 1.0) throw std::invalid_argument("ym_alpha_lambda: alpha must be >= 1");
    if (!(lambda > 0)) throw std::invalid_argument("ym_alpha_lambda: lambda must be positive");
    auto r = integrate_density(
        c,
        [alpha, lambda](const Curv& F, const Quat& z) {
            double chi = chi_lambda(z, lambda);
            return 0.5 * std::pow(3.0 + chi * norm2_g(F, z), alpha) / chi;
        },
        opt, {1.0 / lambda});
    check_required(r, opt, "ym_alpha_lambda");
    return {r.value, alpha, lambda, r.residual, r.grid};
}

std::vector<EnergyReport> ym_alpha_many(const ConnectionModel& c, const std::vector<double>& alphas,
                                        const QuadOptions& opt)
{
    std::vector<EnergyReport> out;
    for (double a : alphas) out.push_back(ym_alpha(c, a, opt));
    return out;
}

double charge_density(const Curv& F, const Quat& z)
{
    auto [Fp, Fm] = hodge_split(F);
    return (norm2_g(Fm, z) - norm2_g(Fp, z)) / (8.0 * M_PI * M_PI);
}

double wedge_trace_density(const Curv& F, const Quat& z)
{
    // tr(F ^ F) = (1/4) eps_ijkl tr(F_ij F_kl) dzeta^1234
    static const int perm[24][5] = {
        {0, 1, 2, 3, 1},  {0, 1, 3, 2, -1}, {0, 2, 1, 3, -1}, {0, 2, 3, 1, 1},  {0, 3, 1, 2, 1},  {0, 3, 2, 1, -1},
        {1, 0, 2, 3, -1}, {1, 0, 3, 2, 1},  {1, 2, 0, 3, 1},  {1, 2, 3, 0, -1}, {1, 3, 0, 2, -1}, {1, 3, 2, 0, 1},
        {2, 0, 1, 3, 1},  {2, 0, 3, 1, -1}, {2, 1, 0, 3, -1}, {2, 1, 3, 0, 1},  {2, 3, 0, 1, 1},  {2, 3, 1, 0, -1},
        {3, 0, 1, 2, -1}, {3, 0, 2, 1, 1},  {3, 1, 0, 2, 1},  {3, 1, 2, 0, -1}, {3, 2, 0, 1, -1}, {3, 2, 1, 0, 1}};
    double s = 0;
    for (const auto& p : perm) s += p[4] * kTracePairing * dot(F(p[0], p[1]), F(p[2], p[3]));
    double flat = 0.25 * s;
    return flat / round_weight(z) / (8.0 * M_PI * M_PI);
}

ChargeReport topological_charge_report(const ConnectionModel& c, const QuadOptions& opt)
{
    auto r = integrate_density(c, charge_density, opt);
    check_required(r, opt, "topological_charge");
    auto w = integrate_density(c, wedge_trace_density, opt);
    return {r.value, r.residual, w.value, r.grid};
}

double lp_curvature_norm(const ConnectionModel& c, double p, const QuadOptions& opt)
{
    if (p < 1) throw std::invalid_argument("lp norm: p must be >= 1");
    auto r = integrate_density(c, [p](const Curv& F, const Quat& z) { return std::pow(norm2_g(F, z), 0.5 * p); }, opt);
    return std::pow(r.value, 1.0 / p);
}

double lp_difference_norm(const ConnectionModel& c1, const ConnectionModel& c2, double p, const QuadOptions& opt)
{
    if (p < 1) throw std::invalid_argument("lp norm: p must be >= 1");
    auto r = integrate_pair(
        c1, c2, [p](const Curv& a, const Curv& b, const Quat& z) { return std::pow(norm2_g(a - b, z), 0.5 * p); }, opt);
    return std::pow(std::max(0.0, r.value), 1.0 / p);
}

double self_dual_norm(const ConnectionModel& c, const QuadOptions& opt)
{
    auto r = integrate_density(c, [](const Curv& F, const Quat& z) { return norm2_g(hodge_split(F).first, z); }, opt);
    return std::sqrt(std::max(0.0, r.value));
}

std::string to_json(const EnergyReport& r)
{
    nlohmann::ordered_json j;
    j["value"] = r.value;
    j["alpha"] = r.alpha;
    j["lambda"] = r.lambda;
    j["residual"] = r.residual;
    j["grid"] = r.grid;
    return j.dump(2);
}

} // namespace yma
