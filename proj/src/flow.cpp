#include "yma/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <sstream>

#include "yma/quadrature.hpp"
#include "yma/rng.hpp"

namespace yma {

RadialEnergy::RadialEnergy(const RadialProfile& shape, double alpha, double lambda)
    : n_(shape.size()), alpha_(alpha), lambda_(lambda), q_pole_(shape.q_pole()), D_(shape.diff_matrix())
{
    if (alpha < 1.0 || lambda <= 0.0) throw std::invalid_argument("RadialEnergy: need alpha >= 1, lambda > 0");
    for (int k = 0; k < n_; ++k) {
        double x = shape.node_x(k), s = shape.node_s(k);
        x_.push_back(x);
        w_.push_back(shape.node_weight_x(k));
        chi_.push_back(chi_lambda(Quat(std::sqrt(s), 0, 0, 0), lambda));
        mass_.push_back(2.0 * M_PI * M_PI * w_.back() * (1.0 - x * x) * 0.75 * s);
    }
    std::vector<double> t(n_);
    for (int k = 0; k < n_; ++k)
        t[k] = w_[k] * (1.0 - x_[k] * x_[k]) * std::pow(3.0 + 3.0 * chi_[k], alpha_) / chi_[k];
    base_ = M_PI * M_PI * pairwise_sum(t);
}

double RadialEnergy::derivative_at(const std::vector<double>& q, int k) const
{
    const auto& row = D_[k];
    double d = row[0] * q_pole_;
    for (int m = 0; m < n_; ++m) d += row[m + 1] * q[m];
    return d;
}

double RadialEnergy::energy(const std::vector<double>& q) const { return base_ + excess(q); }

// E_h(q) - E_h(1) written in delta = q - 1 so that it keeps its relative precision next
// to the basic connection, where Phi - 3 = O(delta).
double RadialEnergy::excess(const std::vector<double>& q) const
{
    std::vector<double> dl(n_), t(n_);
    for (int k = 0; k < n_; ++k) dl[k] = q[k] - 1.0;
    for (int k = 0; k < n_; ++k) {
        double x = x_[k], d = dl[k];
        double ddq = 0;
        for (int m = 0; m < n_; ++m) ddq += D_[k][m + 1] * dl[m];
        ddq += D_[k][0] * (q_pole_ - 1.0);
        double am = d - (1.0 - x) * ddq;                     // a - 1
        double bp = d * (d * (1.0 - x) - 2.0 * x) / (1.0 + x); // b + 1
        double dphi = 1.5 * (am * (am + 2.0) + bp * (bp - 2.0));
        double base = 3.0 + 3.0 * chi_[k];
        t[k] = w_[k] * (1.0 - x * x) * std::pow(base, alpha_) / chi_[k] *
               std::expm1(alpha_ * std::log1p(chi_[k] * dphi / base));
    }
    return M_PI * M_PI * pairwise_sum(t);
}

std::vector<double> RadialEnergy::derivative(const std::vector<double>& q) const
{
    std::vector<double> g(n_, 0.0);
    for (int k = 0; k < n_; ++k) {
        double x = x_[k], dq = derivative_at(q, k);
        double a = q[k] - (1.0 - x) * dq;
        double b = q[k] * (q[k] * (1.0 - x) - 2.0);
        double phi = 1.5 * (a * a + b * b / ((1.0 + x) * (1.0 + x)));
        double c = 3.0 * M_PI * M_PI * w_[k] * (1.0 - x * x) * alpha_ * std::pow(3.0 + chi_[k] * phi, alpha_ - 1.0);
        g[k] += c * (a + b * (2.0 * q[k] * (1.0 - x) - 2.0) / ((1.0 + x) * (1.0 + x)));
        double ca = c * a * (1.0 - x);
        for (int m = 0; m < n_; ++m) g[m] -= ca * D_[k][m + 1];
    }
    return g;
}

std::vector<double> RadialEnergy::gradient(const std::vector<double>& q) const
{
    auto g = derivative(q);
    for (int k = 0; k < n_; ++k) g[k] /= mass_[k];
    return g;
}

double RadialEnergy::gradient_norm(const std::vector<double>& q) const
{
    auto g = derivative(q);
    std::vector<double> t(n_);
    for (int k = 0; k < n_; ++k) t[k] = g[k] * g[k] / mass_[k];
    return std::sqrt(pairwise_sum(t));
}

std::pair<double, double> RadialEnergy::distance_to_basic(const std::vector<double>& q) const
{
    std::vector<double> tc(n_), tf(n_);
    for (int k = 0; k < n_; ++k) {
        double x = x_[k], dq = derivative_at(q, k);
        double da = q[k] - (1.0 - x) * dq - 1.0;
        double db = q[k] * (q[k] * (1.0 - x) - 2.0) / (1.0 + x) + 1.0;
        tc[k] = mass_[k] * (q[k] - 1.0) * (q[k] - 1.0);
        tf[k] = 2.0 * M_PI * M_PI * w_[k] * (1.0 - x * x) * 1.5 * (da * da + db * db);
    }
    return {std::sqrt(pairwise_sum(tc)), std::sqrt(pairwise_sum(tf))};
}

namespace {

std::vector<double> interior_q(const RadialProfile& p)
{
    std::vector<double> q(p.size());
    for (int k = 0; k < p.size(); ++k) q[k] = p.q(k);
    return q;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x)
{
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

} // namespace

FlowState initial_state(const RadialProfile& p, const FlowConfig& cfg)
{
    if (cfg.dt_min <= 0 || cfg.grad_tol <= 0 || cfg.stall_tol <= 0)
        throw std::invalid_argument("FlowConfig: dt_min and thresholds must be positive");
    FlowState s;
    s.profile = p;
    s.dt = cfg.dt_init;
    s.energy = RadialEnergy(p, cfg.alpha, cfg.lambda).energy(interior_q(p));
    return s;
}

FlowState flow_step(const FlowState& s, const FlowConfig& cfg)
{
    RadialEnergy E(s.profile, cfg.alpha, cfg.lambda);
    const std::vector<double> q0 = interior_q(s.profile);
    const double e0 = E.excess(q0);
    const double g0 = E.gradient_norm(q0);
    FlowState out = s;
    double dt = s.dt;
    while (true) {
        auto k1 = E.gradient(q0);
        auto q = q0;
        axpy(q, -0.5 * dt, k1);
        auto k2 = E.gradient(q);
        q = q0;
        axpy(q, -0.5 * dt, k2);
        auto k3 = E.gradient(q);
        q = q0;
        axpy(q, -dt, k3);
        auto k4 = E.gradient(q);
        q = q0;
        for (std::size_t k = 0; k < q.size(); ++k) q[k] -= dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        double e1 = E.excess(q);
        // the gradient norm must not grow either: an energy test alone lets stiff modes
        // sit at the RK4 stability limit without decaying
        bool ok = std::isfinite(e1) && e1 <= e0 + cfg.slack;
        if (ok && cfg.gradient_control) ok = E.gradient_norm(q) <= g0 * (1.0 + 1e-12) + 1e-300;
        if (ok) {
            for (int k = 0; k < out.profile.size(); ++k) out.profile.set_q(k, q[k]);
            out.t += dt;
            out.energy = E.base() + e1;
            out.dt = std::min(dt * cfg.grow, cfg.dt_max);
            ++out.steps;
            return out;
        }
        ++out.rejected;
        dt *= 0.5;
        if (dt < cfg.dt_min) throw StepRejected("flow_step: energy increase persists at dt_min");
    }
}

FlowSample sample_state(const FlowState& s, const FlowConfig& cfg)
{
    RadialEnergy E(s.profile, cfg.alpha, cfg.lambda);
    auto q = interior_q(s.profile);
    FlowSample r;
    r.t = s.t;
    r.dt = s.dt;
    r.energy = E.energy(q);
    r.grad_norm = E.gradient_norm(q);
    auto d = E.distance_to_basic(q);
    r.dist_conn = d.first;
    r.dist_curv = d.second;
    if (cfg.with_charge) {
        QuadOptions opt;
        opt.rel_tol = 1e-12;
        r.charge = topological_charge(*ConnectionModel::radial(s.profile), opt);
    }
    return r;
}

FlowState run_flow_nothrow(const RadialProfile& p0, const FlowConfig& cfg)
{
    FlowState s = initial_state(p0, cfg);
    s.trajectory.push_back(sample_state(s, cfg));
    std::deque<double> dist;
    long since_log = 0;
    while (true) {
        RadialEnergy E(s.profile, cfg.alpha, cfg.lambda);
        auto q = interior_q(s.profile);
        double gn = E.gradient_norm(q);
        dist.push_back(E.distance_to_basic(q).first);
        if (static_cast<int>(dist.size()) > cfg.stall_window + 1) dist.pop_front();
        bool stalled = static_cast<int>(dist.size()) == cfg.stall_window + 1 &&
                       std::fabs(dist.back() - dist.front()) <= cfg.stall_tol * std::max(dist.back(), 1e-300);
        if (gn <= cfg.grad_tol && (stalled || gn <= 1e-3 * cfg.grad_tol)) {
            s.converged = true;
            break;
        }
        if (s.t >= cfg.max_time || s.steps >= cfg.max_steps) break;
        s = flow_step(s, cfg);
        if (++since_log >= cfg.log_every) {
            s.trajectory.push_back(sample_state(s, cfg));
            since_log = 0;
        }
    }
    if (since_log > 0 || s.trajectory.size() == 1) s.trajectory.push_back(sample_state(s, cfg));
    return s;
}

FlowState run_flow(const RadialProfile& p0, const FlowConfig& cfg)
{
    FlowState s = run_flow_nothrow(p0, cfg);
    if (!s.converged) throw FlowNotConverged("run_flow: max_time or max_steps reached");
    return s;
}

FlowState run_flow(const ConnectionModel& c0, const FlowConfig& cfg, int nodes)
{
    if (const auto* r = std::get_if<RadialData>(&c0.data())) return run_flow(r->profile, cfg);
    if (const auto* a = std::get_if<AdhmData>(&c0.data()); a && norm2(a->xi) == 0.0)
        return run_flow(RadialProfile::adhm(nodes, a->lambda), cfg);
    throw std::invalid_argument("run_flow: the flow evolves radial connections only");
}

std::string trajectory_csv(const std::vector<FlowSample>& tr)
{
    std::ostringstream os;
    os << "t,dt,energy,grad_norm,dist_conn,dist_curv,charge\n" << std::setprecision(17);
    for (const auto& r : tr)
        os << r.t << ',' << r.dt << ',' << r.energy << ',' << r.grad_norm << ',' << r.dist_conn << ',' << r.dist_curv
           << ',' << r.charge << '\n';
    return os.str();
}

RadialProfile random_radial_perturbation(int nodes, double eps, std::uint64_t seed)
{
    Rng rng(seed, 0x5a);
    double c[4];
    for (double& v : c) v = rng.normal();
    return RadialProfile::from_function(
        nodes,
        [&](double s) {
            double x = (1.0 - s) / (1.0 + s);
            double p[4] = {1.0, x, 0.5 * (3 * x * x - 1), 0.5 * (5 * x * x * x - 3 * x)};
            double g = 0;
            for (int d = 0; d < 4; ++d) g += c[d] * p[d];
            return (1.0 + eps * (1.0 + x) * (1.0 - x) * g) / (1.0 + s);
        },
        1.0);
}

std::pair<double, double> distance_to_basic(const ConnectionModel& c, const QuadOptions& opt)
{
    auto basic = ConnectionModel::basic();
    auto conn2 = [&](const Quat& z) { return norm2_g(c.potential(z) - basic->potential(z), z); };
    auto curv2 = [&](const Quat& z) { return norm2_g(c.curvature(z) - basic->curvature(z), z); };
    bool radial = std::holds_alternative<RadialData>(c.data()) ||
                  (std::holds_alternative<AdhmData>(c.data()) && c.is_radial());
    if (radial) {
        std::vector<double> breaks = radial_breaks(1.0);
        auto rb = radial_breaks(c.radial_scale());
        breaks.insert(breaks.end(), rb.begin(), rb.end());
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a < 1e-6; }),
                     breaks.end());
        auto integrand = [](auto&& g) {
            return [g](double th) {
                double s = std::sin(th);
                return 2.0 * M_PI * M_PI * s * s * s * g(Quat(std::tan(0.5 * th), 0, 0, 0));
            };
        };
        double a = integrate_doubling(integrand(conn2), breaks, opt.rel_tol, opt.radial_n0, opt.radial_nmax).value;
        double b = integrate_doubling(integrand(curv2), breaks, opt.rel_tol, opt.radial_n0, opt.radial_nmax).value;
        return {std::sqrt(std::max(0.0, a)), std::sqrt(std::max(0.0, b))};
    }
    if (!opt.lattice) throw std::invalid_argument("distance_to_basic: non-radial model needs a lattice");
    const Lattice4D& L = *opt.lattice;
    const auto& ball = L.ball_nodes();
    std::vector<double> ta(ball.size()), tb(ball.size());
    for (std::size_t k = 0; k < ball.size(); ++k) {
        Quat z = L.coord(ball[k]);
        ta[k] = L.weight(ball[k]) * conn2(z);
        tb[k] = L.weight(ball[k]) * curv2(z);
    }
    return {std::sqrt(pairwise_sum(ta)), std::sqrt(pairwise_sum(tb))};
}

} // namespace yma
