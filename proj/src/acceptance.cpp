#include "yma/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "yma/coulomb.hpp"
#include "yma/dilation.hpp"
#include "yma/flow.hpp"
#include "yma/variational.hpp"

namespace yma {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    }
}

void set_key(AcceptanceConfig& c, const std::string& key, const std::string& v)
{
    auto positive = [&](double d) {
        if (!(d > 0)) throw ConfigError("config: " + key + " must be positive");
        return d;
    };
    auto at_least = [&](long long d, long long lo) {
        if (d < lo) throw ConfigError("config: " + key + " must be at least " + std::to_string(lo));
        return int(d);
    };
    if (key == "seed") {
        try {
            std::size_t pos = 0;
            c.seed = std::stoull(v, &pos);
            if (pos != v.size() || v.front() == '-') throw std::invalid_argument(v);
        } catch (const std::exception&) {
            throw ConfigError("config: seed expects an unsigned integer, got '" + v + "'");
        }
    } else if (key == "quad_tol") {
        c.quad_tol = positive(to_double(key, v));
    } else if (key == "variational_R") {
        c.variational_R = positive(to_double(key, v));
    } else if (key == "variational_n") {
        c.variational_n = at_least(to_int(key, v), 5);
    } else if (key == "coulomb_R") {
        c.coulomb_R = positive(to_double(key, v));
    } else if (key == "coulomb_n") {
        c.coulomb_n = at_least(to_int(key, v), 5);
    } else if (key == "coulomb_tol") {
        c.coulomb_tol = positive(to_double(key, v));
    } else if (key == "flow_nodes") {
        c.flow_nodes = at_least(to_int(key, v), 4);
    } else if (key == "lower_bound_samples") {
        c.lower_bound_samples = at_least(to_int(key, v), 1);
    } else if (key == "commutator_draws") {
        c.commutator_draws = at_least(to_int(key, v), 1);
    } else if (key == "criteria") {
        std::vector<int> list;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            long long k = to_int(key, item);
            if (k < 1 || k > 12) throw ConfigError("config: criteria entries must be in 1..12");
            list.push_back(int(k));
        }
        if (list.empty()) throw ConfigError("config: criteria is empty");
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        c.criteria = list;
    } else if (key == "timing") {
        if (v == "true" || v == "1")
            c.timing = true;
        else if (v == "false" || v == "0")
            c.timing = false;
        else
            throw ConfigError("config: timing expects true or false");
    } else if (key == "report") {
        c.report = v;
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

const char* relation_name(Relation r)
{
    switch (r) {
    case Relation::Rel: return "rel";
    case Relation::Abs: return "abs";
    case Relation::Le: return "le";
    case Relation::Lt: return "lt";
    case Relation::Ge: return "ge";
    case Relation::Gt: return "gt";
    }
    return "?";
}

bool holds(Relation r, double v, double t, double tol)
{
    switch (r) {
    case Relation::Rel: return std::fabs(v - t) <= tol * std::fabs(t);
    case Relation::Abs: return std::fabs(v - t) <= tol;
    case Relation::Le: return v <= t;
    case Relation::Lt: return v < t;
    case Relation::Ge: return v >= t;
    case Relation::Gt: return v > t;
    }
    return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Collects checks of one criterion.
class Sink {
public:
    Sink(int criterion, std::vector<CheckResult>& out) : criterion_(criterion), out_(out) {}

    CheckResult& add(const std::string& id, Relation rel, double value, double target, double tol = 0,
                     const std::string& note = "")
    {
        CheckResult c;
        c.criterion = criterion_;
        c.id = id;
        c.anchor = anchor_for(id);
        c.relation = rel;
        c.value = value;
        c.target = target;
        c.tol = tol;
        c.pass = std::isfinite(value) && holds(rel, value, target, tol);
        c.note = note;
        c.runtime = seconds_since(last_);
        last_ = std::chrono::steady_clock::now();
        out_.push_back(c);
        return out_.back();
    }
    // Quadrature value that must also carry a small residual.
    CheckResult& add_quad(const std::string& id, Relation rel, double value, double residual, double target, double tol,
                          double require, double scale = 0)
    {
        auto& c = add(id, rel, value, target, tol);
        if (!(residual <= require * std::max({1.0, std::fabs(value), scale}))) {
            c.pass = false;
            std::ostringstream os;
            os.precision(3);
            os << "quadrature residual " << residual << " above " << require;
            c.note = os.str();
        }
        return c;
    }

    static std::string anchor_for(const std::string& id)
    {
        std::string best;
        std::size_t len = 0;
        for (const auto& [prefix, anchor] : anchor_map())
            if (id.rfind(prefix, 0) == 0 && prefix.size() > len) {
                best = anchor;
                len = prefix.size();
            }
        return best;
    }

private:
    int criterion_;
    std::vector<CheckResult>& out_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string tag(const char* name, double v)
{
    std::ostringstream os;
    os << name << '=' << v;
    return os.str();
}

QuadOptions quad(const AcceptanceConfig& cfg)
{
    QuadOptions o;
    o.rel_tol = cfg.quad_tol;
    return o;
}

// Largest quadrature residual (relative to max(1, |value|)) that still certifies a check of
// tolerance tol. An unreachable quad_tol makes every quadrature check fail.
double require_of(const AcceptanceConfig& cfg, double tol) { return std::min(0.1 * tol, 1e5 * cfg.quad_tol); }

const std::vector<double> kAlphas{1.0, 1.1, 1.5, 2.0};

// 1 --------------------------------------------------------------------------------------
void basic_energy_checks(const AcceptanceConfig& cfg, Sink& s)
{
    auto basic = ConnectionModel::basic();
    auto o = quad(cfg);
    o.route = Route::Radial;
    for (double a : kAlphas) {
        auto r = ym_alpha(*basic, a, o);
        s.add_quad("c1.basic_energy." + tag("alpha", a), Relation::Rel, r.value, r.residual, basic_energy(a), 1e-8,
                   require_of(cfg, 1e-8));
    }
}

// 2 --------------------------------------------------------------------------------------
void curvature_norm_checks(const AcceptanceConfig& cfg, Sink& s)
{
    Rng rng(cfg.seed, 2);
    auto o = quad(cfg);
    for (int k = 0; k < 5; ++k) {
        Quat xi = rng.quat(0.4);
        double l = std::exp(rng.uniform(-0.5, 0.5));
        auto c = ConnectionModel::adhm(xi, l);
        auto r = integrate_density(*c, [](const Curv& F, const Quat& z) { return norm2_g(F, z); }, o);
        s.add_quad("c2.curvature_l2.sample" + std::to_string(k), Relation::Rel, r.value, r.residual, 8 * M_PI * M_PI,
                   1e-8, require_of(cfg, 1e-8));
    }
    auto basic = ConnectionModel::basic();
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        Quat z = rng.quat(1.5);
        worst = std::max(worst, std::fabs(norm2_g(basic->curvature(z), z) - 3.0));
    }
    s.add("c2.pointwise_norm", Relation::Le, worst, 1e-12, 0, "max over 1000 points");
}

// 3 --------------------------------------------------------------------------------------
ModelPtr random_connection(Rng& rng, int k)
{
    int kind = k % 10;
    if (kind < 7) {
        double eps = rng.uniform(0.01, 0.6);
        return ConnectionModel::radial(random_radial_perturbation(16, eps, rng.next()));
    }
    if (kind < 9 || k % 40 != 39) {
        // |xi| <= 0.5 keeps the sphere quadrature resolved for lambda in [1/2, 2]
        Quat xi = rng.unit_quat() * (0.5 * std::pow(rng.uniform(0.0, 1.0), 0.25));
        return ConnectionModel::adhm(xi, std::exp(rng.uniform(-0.69, 0.69)));
    }
    auto base = ConnectionModel::radial(random_radial_perturbation(16, rng.uniform(0.05, 0.3), rng.next()));
    auto t = GaugeTransform::bump(rng.quat(0.3), rng.uniform(1.2, 2.0), rng.imq(0.3));
    return gauge_act(t, base);
}

void lower_bound_checks(const AcceptanceConfig& cfg, Sink& s)
{
    Rng rng(cfg.seed, 3);
    auto o = quad(cfg);
    o.sphere_levels = {16, 24, 32, 48, 64};
    for (int k = 0; k < cfg.lower_bound_samples; ++k) {
        auto c = random_connection(rng, k);
        auto rs = ym_alpha_many(*c, kAlphas, o);
        double margin = std::numeric_limits<double>::infinity(), res = 0;
        for (std::size_t a = 0; a < kAlphas.size(); ++a) {
            margin = std::min(margin, rs[a].value - basic_energy(kAlphas[a]));
            res = std::max(res, rs[a].residual);
        }
        auto& chk = s.add_quad("c3.lower_bound.sample" + std::to_string(k), Relation::Ge, margin, res, -1e-6, 0,
                               require_of(cfg, 1e-8), basic_energy(1.0));
        if (chk.note.empty()) chk.note = c->kind();
    }
}

// 4 --------------------------------------------------------------------------------------
void charge_checks(const AcceptanceConfig& cfg, Sink& s)
{
    Rng rng(cfg.seed, 4);
    auto o = quad(cfg);
    std::vector<ModelPtr> cs{ConnectionModel::basic()};
    for (int k = 0; k < 3; ++k) cs.push_back(ConnectionModel::adhm(rng.quat(0.4), std::exp(rng.uniform(-0.5, 0.5))));
    for (std::size_t k = 0; k < cs.size(); ++k) {
        auto q = topological_charge_report(*cs[k], o);
        s.add_quad("c4.charge.adhm" + std::to_string(k), Relation::Abs, q.value, q.residual, 1.0, 1e-8, require_of(cfg, 1e-8));
    }
    s.add("c4.asd", Relation::Le, self_dual_norm(*cs[0], o), 1e-8);
}

// 5 --------------------------------------------------------------------------------------
void symmetry_checks(const AcceptanceConfig& cfg, Sink& s)
{
    auto basic = ConnectionModel::basic();
    auto o = quad(cfg);
    for (double a : kAlphas) {
        auto e0 = ym_alpha(*basic, a, o);
        for (double l : {1.5, 2.0, 5.0, 10.0}) {
            auto p = pullback(ConformalMap::dilation(l), basic);
            auto e = ym_alpha_lambda(*p, a, l, o);
            std::string grid = tag("alpha", a) + "." + tag("lambda", l);
            s.add_quad("c5.dilation_isometry." + grid, Relation::Rel, e.value, e.residual, e0.value, 1e-8,
                       require_of(cfg, 1e-8));
            auto up = ym_alpha_lambda(*basic, a, l, o), down = ym_alpha_lambda(*basic, a, 1.0 / l, o);
            s.add_quad("c5.lambda_symmetry." + grid, Relation::Rel, up.value, std::max(up.residual, down.residual),
                       down.value, 1e-8, require_of(cfg, 1e-8));
        }
    }
}

// 6 --------------------------------------------------------------------------------------
void profile_checks(const AcceptanceConfig& cfg, Sink& s)
{
    const double tol = cfg.quad_tol;
    for (double a : {1.0, 1.25, 1.5, 1.75, 2.0})
        for (double l : {1.5, 2.0, 5.0, 10.0, 100.0}) {
            auto r = pullback_energy(a, l, ProfileRoute::Radial, tol);
            auto w = pullback_energy(a, l, ProfileRoute::WSubstitution, tol);
            auto h = pullback_energy(a, l, ProfileRoute::Hyperbolic, tol);
            double d = std::max({std::fabs(r.value - w.value), std::fabs(r.value - h.value), std::fabs(w.value - h.value)}) /
                       std::fabs(r.value);
            double res = std::max({r.residual, w.residual, h.residual});
            s.add_quad("c6.routes." + tag("alpha", a) + "." + tag("lambda", l), Relation::Le, d, res / std::fabs(r.value),
                       1e-8, 0, require_of(cfg, 1e-8));
        }

    double min_gp = std::numeric_limits<double>::infinity();
    for (double b : {0.05, 0.1, 0.25, 0.5, 1.0})
        for (double sg : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            auto gp = G_prime(sg, b, tol);
            min_gp = std::min(min_gp, gp.value);
            const double d = 1e-3;
            auto G = [&](double x) { return G_of_sigma(x, b, tol).value; };
            double fd = (8 * (G(sg + d) - G(sg - d)) - (G(sg + 2 * d) - G(sg - 2 * d))) / (12 * d);
            s.add("c6.gprime_fd." + tag("beta", b) + "." + tag("sigma", sg), Relation::Le,
                  std::fabs(fd - gp.value) / std::max(1.0, std::fabs(gp.value)), 1e-6);
        }
    s.add("c6.gprime_positive", Relation::Gt, min_gp, 0.0, 0, "min over 35 samples");

    std::vector<GapSample> samples;
    double min_gap = std::numeric_limits<double>::infinity();
    for (double a : {1.1, 1.25, 1.5, 1.75, 2.0})
        for (double l : {1.5, 2.0, 5.0, 10.0, 100.0, 1e4}) {
            samples.push_back({a, l});
            min_gap = std::min(min_gap, gap(a, l, tol).value);
        }
    s.add("c6.gap_nonnegative", Relation::Ge, min_gap, 0.0, 0, "min over 30 samples");
    auto fit = verify_gap_bounds(samples);
    for (int k = 0; k < 3; ++k)
        s.add("c6.gap_fit.regime" + std::to_string(k + 1), Relation::Gt, fit.C[k], 0.0, 0,
              std::to_string(fit.count[k]) + " samples");
    s.add("c6.gap_fit.derivative", Relation::Gt, fit.C_derivative, 0.0);
}

// 7 --------------------------------------------------------------------------------------
void chi_checks(const AcceptanceConfig&, Sink& s)
{
    for (double l : {1.5, 2.0, 10.0}) {
        auto r = chi_sobolev_norms(l);
        s.add("c7.chi_closed_form." + tag("lambda", l), Relation::Rel, r.grad * r.grad, r.grad2_closed, 1e-6,
              "residual " + fmt(r.residual));
    }
    auto fit = fit_chi_bounds({1.05, 1.2, 1.5, 2.0, M_E, 5.0, 20.0, 100.0, 1e3});
    s.add("c7.chi_regimes.log", Relation::Gt, fit.C_log, 0.0);
    s.add("c7.chi_regimes.sqrt", Relation::Gt, fit.C_sqrt, 0.0);
}

// 8 --------------------------------------------------------------------------------------
ModelPtr perturbed_connection(Rng& rng, int k)
{
    if (k % 2 == 0) return ConnectionModel::adhm(rng.quat(0.15), std::exp(rng.uniform(-0.2, 0.2)));
    return ConnectionModel::radial(random_radial_perturbation(16, rng.uniform(0.02, 0.1), rng.next()));
}

double measured_order(double coarse, double fine) { return std::log2(coarse / fine); }

void variational_checks(const AcceptanceConfig& cfg, Sink& s)
{
    auto L = std::make_shared<Lattice4D>(cfg.variational_R, cfg.variational_n, 6);
    Stencil S(L, 6);
    const double alpha = 1.3, lambda = 2.0;
    const double inner = L->R() - S.half_width() * L->h();
    Rng rng(cfg.seed, 8);
    for (int k = 0; k < 10; ++k) {
        auto c = perturbed_connection(rng, k);
        Field1 G = sample_potential(*c, *L);
        Field1 gd = discrete_energy_gradient(S, G, alpha, lambda);
        double e = 0, nn = 0;
        for (auto n : L->ball_nodes()) {
            Quat z = L->coord(n);
            if (norm(z) > inner) continue;
            double w = L->weight(n) * inv_conformal(z);
            Form1 ga = gradient_ym_alpha_lambda(*c, alpha, lambda, z).total;
            e += w * flat_norm2(ga - gd[n]);
            nn += w * flat_norm2(ga);
        }
        s.add("c8.gradient.sample" + std::to_string(k), Relation::Le, std::sqrt(e / nn), 1e-3, 0, c->kind());
    }

    auto c1 = ConnectionModel::adhm(Quat(0.2, 0.1, 0.0, -0.1), 1.2);
    auto c2 = ConnectionModel::basic();
    std::vector<double> ds, pf, pd;
    for (int n : {17, 33}) {
        auto Ln = std::make_shared<Lattice4D>(1.0, n, 2);
        Stencil Sn(Ln, 2);
        ds.push_back(l2_norm(*Ln, dstar_F_lattice(Sn, sample_potential(*c1, *Ln))));
        pf.push_back(polarization_residuals(*c1, *c2, Sn, 1.0, false).F);
        pd.push_back(polarization_residuals(*c1, *c2, Sn, 1.0, true).dstarF);
    }
    s.add("c8.dstarF_order", Relation::Ge, measured_order(ds[0], ds[1]), 1.9, 0, "h = 1/8 -> 1/16");
    s.add("c8.polarization.F_order", Relation::Ge, measured_order(pf[0], pf[1]), 1.9);
    s.add("c8.polarization.dstarF_order", Relation::Ge, measured_order(pd[0], pd[1]), 1.9);

    Rng crng(cfg.seed, 81);
    auto cc = commutator_bound_check(crng, cfg.commutator_draws);
    s.add("c8.commutator.A", Relation::Le, cc.A, 0.0, 0, std::to_string(cc.draws) + " draws");
    s.add("c8.commutator.B", Relation::Le, cc.B, 0.0, 0, std::to_string(cc.draws) + " draws");
}

// 9 --------------------------------------------------------------------------------------
std::vector<double> moduli_residuals(double R, int n)
{
    auto L = std::make_shared<Lattice4D>(R, n, 6);
    Stencil S(L, 6);
    auto basic = ConnectionModel::basic();
    Field1 G = sample_potential(*basic, *L);
    Field2 F = sample_curvature(*basic, *L, S.depth(1));
    auto B = moduli_basis(L);
    std::vector<double> out;
    for (const auto& b : B.b) out.push_back(l2_norm(*L, jacobi_apply(S, G, F, b)) / l2_norm(*L, b));
    return out;
}

void jacobi_checks(const AcceptanceConfig& cfg, Sink& s)
{
    auto fine = moduli_residuals(cfg.variational_R, cfg.variational_n);
    int coarse_n = (cfg.variational_n + 1) / 2 + ((cfg.variational_n + 1) / 2 % 2 == 0 ? 1 : 0);
    auto coarse = moduli_residuals(cfg.variational_R, coarse_n);
    auto names = moduli_basis(std::make_shared<Lattice4D>(1.0, 5, 1)).names;
    for (std::size_t k = 0; k < fine.size(); ++k) {
        s.add("c9.jacobi_kernel." + names[k], Relation::Le, fine[k], 1e-2);
        s.add("c9.jacobi_refine." + names[k], Relation::Lt, fine[k], coarse[k], 0, "coarse n=" + std::to_string(coarse_n));
    }
}

// 10 -------------------------------------------------------------------------------------
void flow_checks(const AcceptanceConfig& cfg, Sink& s)
{
    const double alpha = 1.1, E0 = basic_energy(alpha);
    FlowConfig fc;
    fc.alpha = alpha;
    fc.log_every = 1000;
    auto o = quad(cfg);
    Rng rng(cfg.seed, 10);
    for (int k = 0; k < 5; ++k) {
        std::uint64_t seed = rng.next();
        double eps = 0.05;
        RadialProfile p0;
        double excess = 0;
        for (int t = 0; t < 20; ++t) {
            p0 = random_radial_perturbation(cfg.flow_nodes, eps, seed);
            excess = ym_alpha(*ConnectionModel::radial(p0), alpha, o).value - E0;
            if (excess <= 0.1) break;
            eps *= 0.7;
        }
        const std::string id = "c10.flow.run" + std::to_string(k);
        s.add(id + ".initial_excess", Relation::Le, excess, 0.1, 0, "eps " + fmt(eps));
        auto st = run_flow_nothrow(p0, fc);
        s.add(id + ".converged", Relation::Ge, st.converged ? 1.0 : 0.0, 1.0, 0,
              "t " + fmt(st.t) + ", steps " + std::to_string(st.steps));
        auto final_model = ConnectionModel::radial(st.profile);
        s.add(id + ".distance", Relation::Le, distance_to_basic(*final_model).first, 1e-3);
        s.add(id + ".energy", Relation::Abs, ym_alpha(*final_model, alpha, o).value, E0, 1e-4);
        double rise = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < st.trajectory.size(); ++i)
            rise = std::max(rise, st.trajectory[i].energy - st.trajectory[i - 1].energy);
        s.add(id + ".monotone", Relation::Le, rise, 0.0, 0, std::to_string(st.trajectory.size()) + " samples");
    }
}

// 11 -------------------------------------------------------------------------------------
void coulomb_checks(const AcceptanceConfig& cfg, Sink& s)
{
    CoulombOptions opt;
    opt.tol = cfg.coulomb_tol;
    CoulombOperator op(std::make_shared<Lattice4D>(cfg.coulomb_R, cfg.coulomb_n, 2));
    Rng rng(cfg.seed, 11);

    auto t = GaugeTransform::bump(rng.quat(0.2), 0.5 * cfg.coulomb_R, rng.imq(0.2));
    auto dec = gauge_act(t, ConnectionModel::basic());
    auto r = coulomb_project(op, *dec, opt);
    s.add("c11.roundtrip.residual", Relation::Le, r.residual.back(), 1e-8, 0,
          std::to_string(r.residual.size() - 1) + " outer iterations");
    s.add("c11.roundtrip.contraction", Relation::Lt, r.contraction, 1.0);

    auto c = gauge_act(GaugeTransform::bump(rng.quat(0.2), 0.5 * cfg.coulomb_R, rng.imq(0.1)),
                       ConnectionModel::adhm(rng.quat(0.03), 1.03));
    const std::pair<const char*, ConformalMap> maps[] = {
        {"rotation_i_1", ConformalMap::rotation(basis(1), Quat(1.0))},
        {"rotation_j_k", ConformalMap::rotation(basis(2), basis(3))},
        {"rotation_1_k", ConformalMap::rotation(Quat(1.0), basis(3))},
        {"dilation_1.1", ConformalMap::dilation(1.1)},
    };
    for (const auto& [name, m] : maps) {
        auto rep = commute_check(*c, m, cfg.coulomb_R, cfg.coulomb_n, opt);
        s.add(std::string("c11.commute.") + name, Relation::Le, rep.diff, 10 * opt.tol, 0,
              "||Pi[c] - basic|| = " + fmt(rep.scale));
    }

    std::vector<ModelPtr> family;
    // curvature distances between about 2e-3 and 9e-2 in each of the three directions
    for (double l : {1.0003, 1.002, 1.012}) family.push_back(ConnectionModel::adhm(Quat(0.0), l));
    for (double x : {0.0003, 0.002, 0.01}) family.push_back(ConnectionModel::adhm(Quat(x, 0.5 * x, 0.0, 0.0), 1.0));
    for (double e : {0.0003, 0.002, 0.008})
        family.push_back(ConnectionModel::radial(random_radial_perturbation(16, e, rng.next())));
    auto b = bootstrap(op, family, opt);
    double lo = 1e300, hi = 0;
    for (const auto& smp : b.samples) {
        lo = std::min(lo, smp.curv_dist);
        hi = std::max(hi, smp.curv_dist);
    }
    s.add("c11.bootstrap.range_low", Relation::Ge, lo, 1e-3);
    s.add("c11.bootstrap.range_high", Relation::Le, hi, 1e-1);
    s.add("c11.bootstrap.spread", Relation::Le, b.spread, 10.0, 0, "fitted C = " + fmt(b.C));
}

// 12 -------------------------------------------------------------------------------------
void z_checks(const AcceptanceConfig& cfg, Sink& s)
{
    Rng rng(cfg.seed, 12);
    double l0 = std::exp(rng.uniform(-0.15, 0.15));
    Quat b0 = rng.quat(0.06);
    auto planted = pullback(ConformalMap::affine(l0, b0), ConnectionModel::basic());
    ZOptions zo;
    zo.coulomb.tol = cfg.coulomb_tol;
    auto z = minimize_conformal_distance(*planted, zo);
    std::string note = std::to_string(z.evaluations) + " evaluations";
    s.add("c12.planted.lambda", Relation::Abs, z.lambda, 1.0 / l0, 1e-3, note);
    s.add("c12.planted.xi", Relation::Le, norm(z.xi + b0 * (1.0 / l0)), 1e-3);
    s.add("c12.planted.Z", Relation::Le, z.Z, 1e-6, 0, "Z(identity) = " + fmt(z.Z_identity));
}

using Runner = void (*)(const AcceptanceConfig&, Sink&);
const Runner kRunners[12] = {basic_energy_checks, curvature_norm_checks, lower_bound_checks, charge_checks,
                             symmetry_checks,     profile_checks,        chi_checks,         variational_checks,
                             jacobi_checks,       flow_checks,           coulomb_checks,     z_checks};

} // namespace

AcceptanceConfig parse_config(const std::string& text)
{
    AcceptanceConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        set_key(c, key, value);
    }
    return c;
}

AcceptanceConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(AcceptanceConfig& cfg, const std::string& kv)
{
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not key=value");
    set_key(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
}

const char* criterion_title(int k)
{
    static const char* titles[12] = {
        "basic energy value",
        "curvature norms",
        "alpha-energy lower bound",
        "charge and anti-self-duality",
        "dilation symmetries",
        "dilation profile consistency",
        "chi_lambda norms",
        "variational correctness",
        "Jacobi kernel",
        "alpha-flow convergence",
        "Coulomb projection",
        "Z-minimization",
    };
    return k >= 1 && k <= 12 ? titles[k - 1] : "unknown";
}

const std::vector<std::pair<std::string, std::string>>& anchor_map()
{
    static const std::vector<std::pair<std::string, std::string>> m = {
        {"c1.basic_energy", "alpha-energy of the basic connection equals 6^alpha (4/3) pi^2"},
        {"c2.curvature_l2", "every ADHM instanton has ||F||^2 = 8 pi^2"},
        {"c2.pointwise_norm", "the basic connection has |F|^2 = 3 at every point of the round sphere"},
        {"c3.lower_bound", "lower bound YM_alpha >= 6^alpha (4/3) pi^2 on the charge-one bundle"},
        {"c4.charge", "ADHM instantons have charge one"},
        {"c4.asd", "the basic curvature is anti-self-dual"},
        {"c5.dilation_isometry", "pullback by a dilation is an isometry from YM_alpha to YM_{alpha,lambda}"},
        {"c5.lambda_symmetry", "YM_{alpha,lambda} of the basic connection is symmetric under lambda -> 1/lambda"},
        {"c6.routes", "radial, w-substitution and hyperbolic forms of the dilated basic energy agree"},
        {"c6.gprime_fd", "integrated-by-parts form of G' equals the derivative of G"},
        {"c6.gprime_positive", "G' > 0, so the dilated energy grows with lambda"},
        {"c6.gap_nonnegative", "the dilation gap is nonnegative"},
        {"c6.gap_fit", "three-regime lower bounds on the dilation gap hold with positive fitted constants"},
        {"c7.chi_closed_form", "closed form of ||grad log chi_lambda||^2"},
        {"c7.chi_regimes", "log and square-root regime bounds on the derivatives of log chi_lambda"},
        {"c8.gradient", "L^2 gradient of YM_{alpha,lambda} including the two chi terms"},
        {"c8.dstarF_order", "D*F of an ADHM instanton vanishes (Yang-Mills equation)"},
        {"c8.polarization", "polarization identities for F and D*F of two connections"},
        {"c8.commutator", "commutator bounds against the basic curvature"},
        {"c9.jacobi_kernel", "moduli directions lie in the kernel of the Jacobi operator"},
        {"c9.jacobi_refine", "moduli-direction Jacobi residual shrinks under refinement"},
        {"c10.flow", "alpha-flow from a nearby radial connection converges to the basic connection"},
        {"c11.roundtrip", "Coulomb fixed-point iteration recovers a gauge-decorated basic connection"},
        {"c11.commute", "Coulomb projection commutes with conformal automorphisms"},
        {"c11.bootstrap", "projected connection distance bounded by curvature distance"},
        {"c12.planted", "Z-minimization over conformal maps recovers a planted map"},
    };
    return m;
}

bool AcceptanceReport::pass() const
{
    if (criteria.empty()) return false;
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass(); });
}

AcceptanceReport run_acceptance(const AcceptanceConfig& cfg, const std::function<void(const CriterionSummary&)>& on_criterion)
{
    AcceptanceReport rep;
    rep.config = cfg;
    for (int k : cfg.criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::size_t first = rep.checks.size();
        Sink sink(k, rep.checks);
        try {
            kRunners[k - 1](cfg, sink);
        } catch (const std::exception& e) {
            auto& c = sink.add("c" + std::to_string(k) + ".crashed", Relation::Le, 1.0, 0.0);
            c.pass = false;
            c.note = e.what();
        }
        CriterionSummary sm;
        sm.criterion = k;
        sm.title = criterion_title(k);
        sm.runtime = seconds_since(t0);
        for (std::size_t i = first; i < rep.checks.size(); ++i) {
            ++sm.checks;
            if (!rep.checks[i].pass) {
                if (sm.failed == 0) sm.worst = rep.checks[i].id;
                ++sm.failed;
            }
        }
        rep.criteria.push_back(sm);
        if (on_criterion) on_criterion(sm);
    }
    return rep;
}

std::string report_json(const AcceptanceReport& r)
{
    using json = nlohmann::ordered_json;
    const auto& c = r.config;
    json meta;
    meta["schema"] = kReportSchema;
    meta["version"] = kLibraryVersion;
    meta["seed"] = c.seed;
    meta["quad_tol"] = c.quad_tol;
    meta["variational_lattice"] = {{"R", c.variational_R}, {"n", c.variational_n}, {"pad", 6}, {"order", 6}};
    meta["coulomb_lattice"] = {{"R", c.coulomb_R}, {"n", c.coulomb_n}, {"pad", 2}, {"order", 2}};
    meta["coulomb_tol"] = c.coulomb_tol;
    meta["flow_nodes"] = c.flow_nodes;
    meta["lower_bound_samples"] = c.lower_bound_samples;
    meta["commutator_draws"] = c.commutator_draws;

    json crit = json::array();
    for (const auto& s : r.criteria) {
        json j;
        j["criterion"] = s.criterion;
        j["title"] = s.title;
        j["pass"] = s.pass();
        j["checks"] = s.checks;
        j["failed"] = s.failed;
        if (c.timing) j["runtime"] = s.runtime;
        crit.push_back(j);
    }
    json checks = json::array();
    for (const auto& k : r.checks) {
        json j;
        j["id"] = k.id;
        j["criterion"] = k.criterion;
        j["anchor"] = k.anchor;
        j["relation"] = relation_name(k.relation);
        j["value"] = std::isfinite(k.value) ? json(k.value) : json(nullptr);
        j["target"] = k.target;
        j["tol"] = k.tol;
        j["pass"] = k.pass;
        if (c.timing) j["runtime"] = k.runtime;
        if (!k.note.empty()) j["note"] = k.note;
        checks.push_back(j);
    }
    json out;
    out["suite"] = meta;
    out["pass"] = r.pass();
    out["criteria"] = crit;
    out["checks"] = checks;
    return out.dump(2) + "\n";
}

std::string criterion_line(const CriterionSummary& s)
{
    std::ostringstream os;
    os << (s.pass() ? "PASS" : "FAIL") << "  criterion " << s.criterion << " (" << s.title << "): " << s.checks - s.failed
       << "/" << s.checks << " checks";
    if (s.failed > 0) os << ", first failure " << s.worst;
    return os.str();
}

} // namespace yma
