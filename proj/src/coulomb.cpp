#include "yma/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace yma {

namespace {

double sup_norm(const Lattice4D& L, const Field0& s)
{
    double m = 0;
    for (auto n : L.ball_nodes()) m = std::max(m, norm(s[n]));
    return m;
}

// Constant unit quaternion u with (rho^* basic) = u^{-1} basic u for the rotation part rho
// of m, restricted to the signed axis permutations we support.
Quat compensating_gauge(const ConformalMap& m)
{
    auto basic = ConnectionModel::basic();
    auto pb = pullback(ConformalMap::rotation(m.p, m.q), basic);
    const Quat probes[3] = {Quat(0.3, -0.2, 0.5, 0.1), Quat(-0.4, 0.7, 0.2, -0.3), Quat(1.1, 0.0, -0.6, 0.4)};
    std::vector<Quat> cands = {Quat(1.0), basis(1), basis(2), basis(3), m.p, m.q, conj(m.p), conj(m.q)};
    for (const auto& a : std::vector<Quat>(cands)) {
        cands.push_back(a * m.p);
        cands.push_back(a * m.q);
    }
    double best = 1e300;
    Quat u(1.0);
    for (const auto& c : cands) {
        Quat v = c * (1.0 / norm(c));
        double e = 0;
        for (const auto& z : probes) {
            Form1 a = pb->potential(z), b = basic->potential(z);
            for (int i = 0; i < 4; ++i) e = std::max(e, norm(a[i] - conjugate_by(v, b[i])));
        }
        if (e < best) {
            best = e;
            u = v;
        }
    }
    if (best > 1e-12) throw std::invalid_argument("commute_check: rotation must be a signed axis permutation");
    return u;
}

} // namespace

CoulombOperator::CoulombOperator(std::shared_ptr<const Lattice4D> L) : L_(std::move(L))
{
    if (L_->pad() < 2) throw std::invalid_argument("CoulombOperator: lattice pad must be >= 2");
    const auto& lat = *L_;
    near_ = nodes_within(lat, 1);
    nb_.resize(lat.size());
    w0_.resize(lat.size());
    w1_.resize(lat.size());
    for (std::size_t n = 0; n < lat.size(); ++n) {
        for (int i = 0; i < 4; ++i) {
            nb_[n][2 * i] = lat.neighbor(n, i, 1);
            nb_[n][2 * i + 1] = lat.neighbor(n, i, -1);
        }
        w0_[n] = lat.weight(n);
        w1_[n] = w0_[n] * inv_conformal(lat.coord(n));
    }
    G_ = sample_potential(*ConnectionModel::basic(), lat);
}

Field1 CoulombOperator::grad(const Field0& sigma) const
{
    Field1 out(L_->size(), Form1{});
    const double inv2h = 0.5 / L_->h();
    for (auto n : near_)
        for (int i = 0; i < 4; ++i)
            out[n][i] = inv2h * (sigma[nb_[n][2 * i]] - sigma[nb_[n][2 * i + 1]]) + bracket(G_[n][i], sigma[n]);
    return out;
}

Field0 CoulombOperator::dstar(const Field1& Y) const
{
    Field0 out(L_->size(), ImQ{});
    const double inv2h = 0.5 / L_->h();
    for (auto m : L_->ball_nodes()) {
        ImQ s{};
        for (int i = 0; i < 4; ++i) {
            auto p = nb_[m][2 * i], q = nb_[m][2 * i + 1];
            s += inv2h * (w1_[q] * Y[q][i] - w1_[p] * Y[p][i]);
            s -= w1_[m] * bracket(G_[m][i], Y[m][i]);
        }
        out[m] = s / w0_[m];
    }
    return out;
}

double CoulombOperator::dot0(const Field0& a, const Field0& b) const
{
    double s = 0;
    for (auto n : L_->ball_nodes()) s += w0_[n] * dot(a[n], b[n]);
    return s;
}

double CoulombOperator::norm0(const Field0& a) const { return std::sqrt(dot0(a, a)); }

Field1 CoulombOperator::gauge(const Field0& sigma, const Field1& Gamma) const
{
    std::vector<Quat> s(L_->size(), Quat(1.0));
    for (auto n : L_->ball_nodes()) s[n] = exp_im(sigma[n]);
    Field1 out(L_->size(), Form1{});
    const double inv2h = 0.5 / L_->h();
    for (auto n : near_) {
        Quat si = conj(s[n]);
        for (int i = 0; i < 4; ++i) {
            Quat d = inv2h * (s[nb_[n][2 * i]] - s[nb_[n][2 * i + 1]]);
            out[n][i] = im_part(si * d) + conjugate_by(s[n], Gamma[n][i]);
        }
    }
    return out;
}

double CoulombOperator::residual(const Field1& Gamma) const
{
    Field1 u(L_->size(), Form1{});
    for (auto n : near_) u[n] = Gamma[n] - G_[n];
    return norm0(dstar(u));
}

int CoulombOperator::solve(const Field0& b, Field0& x, double abs_tol, int max_iter) const
{
    const auto& ball = L_->ball_nodes();
    x.resize(L_->size());
    Field0 r = b, Ax = laplace(x);
    for (auto n : ball) r[n] -= Ax[n];
    Field0 p = r;
    double rr = dot0(r, r);
    for (int it = 0; it <= max_iter; ++it) {
        if (std::sqrt(rr) <= abs_tol) return it;
        if (it == max_iter) break;
        Field0 Ap = laplace(p);
        double a = rr / dot0(p, Ap);
        for (auto n : ball) {
            x[n] += a * p[n];
            r[n] -= a * Ap[n];
        }
        double rn = dot0(r, r);
        double beta = rn / rr;
        rr = rn;
        for (auto n : ball) p[n] = r[n] + beta * p[n];
    }
    std::ostringstream os;
    os << "CG: residual " << std::sqrt(rr) << " above " << abs_tol << " after " << max_iter << " iterations";
    throw CgNotConverged(os.str());
}

Field0 dstar_against_basic(const CoulombOperator& op, const Field1& Upsilon) { return op.dstar(Upsilon); }

Field1 w_operator(const Field0& sigma, const Field1& Upsilon)
{
    Field1 out(Upsilon.size());
    for (std::size_t n = 0; n < Upsilon.size(); ++n) {
        Quat s = exp_im(sigma[n]);
        for (int i = 0; i < 4; ++i) out[n][i] = conjugate_by(s, Upsilon[n][i]);
    }
    return out;
}

CoulombResult coulomb_project(const CoulombOperator& op, const Field1& Gamma, const CoulombOptions& opt)
{
    const auto& L = op.lattice();
    const auto& G = op.basic();
    CoulombResult res;
    res.lattice = op.lattice_ptr();
    res.sigma.assign(L.size(), ImQ{});
    res.damping = opt.damping;

    const double cut = 0.8 * L.R();
    for (auto n : nodes_within(L, 1))
        if (norm(L.coord(n)) > cut && std::sqrt(flat_norm2(Gamma[n] - G[n])) > 1e-12) {
            res.support_ok = false;
            break;
        }

    res.projected = op.gauge(res.sigma, Gamma);
    res.residual.push_back(op.residual(res.projected));
    res.cg_iters.push_back(0);
    res.sigma_sup.push_back(0);
    int increases = 0;
    for (int outer = 1;; ++outer) {
        if (res.residual.back() <= opt.tol) {
            res.converged = true;
            break;
        }
        if (outer > opt.max_outer) {
            std::ostringstream os;
            os << "Coulomb projection: residual " << res.residual.back() << " above " << opt.tol << " after "
               << opt.max_outer << " outer iterations";
            throw CoulombMaxOuter(os.str());
        }
        Field1 u(L.size(), Form1{});
        for (auto n : nodes_within(L, 1)) u[n] = res.projected[n] - G[n];
        Field0 b = op.dstar(u);
        Field0 delta(L.size(), ImQ{});
        double cg_tol = std::max(opt.cg_rel * op.norm0(b), 0.1 * opt.tol);
        int its = op.solve(b, delta, cg_tol, opt.cg_max);
        for (auto n : L.ball_nodes()) res.sigma[n] -= res.damping * delta[n];
        res.projected = op.gauge(res.sigma, Gamma);
        double r = op.residual(res.projected);
        if (r > res.residual.back()) {
            ++increases;
            if (increases >= 2) {
                std::ostringstream os;
                os << "Coulomb projection diverged at outer iteration " << outer << ": residual " << r;
                throw CoulombDiverged(os.str());
            }
            res.damping *= 0.5;
        } else {
            increases = 0;
        }
        res.residual.push_back(r);
        res.cg_iters.push_back(its);
        res.sigma_sup.push_back(sup_norm(L, res.sigma));
    }
    for (std::size_t l = 2; l < res.residual.size(); ++l)
        if (res.residual[l - 1] > 0) res.contraction = std::max(res.contraction, res.residual[l] / res.residual[l - 1]);
    return res;
}

CoulombResult coulomb_project(const CoulombOperator& op, const ConnectionModel& c, const CoulombOptions& opt)
{
    return coulomb_project(op, sample_potential(c, op.lattice()), opt);
}

std::string coulomb_csv(const CoulombResult& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "outer_iter,residual,cg_iters,sigma_sup_norm\n";
    for (std::size_t l = 0; l < r.residual.size(); ++l)
        os << l << ',' << r.residual[l] << ',' << r.cg_iters[l] << ',' << r.sigma_sup[l] << '\n';
    return os.str();
}

ProjectedDistance projected_distance(const CoulombOperator& op, const CoulombResult& r, const ConnectionModel& c)
{
    const auto& L = op.lattice();
    const auto& G = op.basic();
    auto basic = ConnectionModel::basic();
    double a = 0, b = 0;
    for (auto n : L.ball_nodes()) {
        Quat z = L.coord(n);
        double e = inv_conformal(z);
        a += L.weight(n) * e * flat_norm2(r.projected[n] - G[n]);
        Curv F = conjugate_curv(exp_im(r.sigma[n]), c.curvature(z));
        b += L.weight(n) * e * e * flat_norm2(F - basic->curvature(z));
    }
    return {std::sqrt(a), std::sqrt(b)};
}

CommuteReport commute_check(const ConnectionModel& c, const ConformalMap& m, double R, int n, const CoulombOptions& opt)
{
    if (!m.is_linear()) throw std::invalid_argument("commute_check: map must be linear");
    auto L1 = std::make_shared<Lattice4D>(R, n, 2);
    auto L2 = std::make_shared<Lattice4D>(R / m.lambda, n, 2);
    Quat u = compensating_gauge(m);

    CoulombOperator op1(L1), op2(L2);
    auto base = std::make_shared<ConnectionModel>(c);
    auto r1 = coulomb_project(op1, c, opt);
    // u phi^*c u^{-1} sits next to the basic connection; projecting phi^*c itself would start O(1) away
    Field1 g2 = sample_potential(*pullback(m, base), *L2);
    for (auto& f : g2)
        for (auto& a : f) a = conjugate_by(conj(u), a);
    auto r2 = coulomb_project(op2, g2, opt);

    CommuteReport rep;
    rep.residual_a = r1.residual.back();
    rep.residual_b = r2.residual.back();
    const auto& G2 = op2.basic();
    double d = 0, s = 0;
    for (auto k2 : L2->ball_nodes()) {
        Quat z2 = L2->coord(k2);
        auto k1 = L1->locate(m.apply(z2));
        if (k1 < 0) throw std::invalid_argument("commute_check: map does not send lattice nodes to lattice nodes");
        auto J = m.jacobian(z2);
        Form1 pulled{};
        for (int i = 0; i < 4; ++i) {
            ImQ acc{};
            for (int k = 0; k < 4; ++k) acc += J[k][i] * r1.projected[k1][k];
            pulled[i] = conjugate_by(conj(u), acc);
        }
        double w = L2->weight(k2) * inv_conformal(z2);
        d += w * flat_norm2(r2.projected[k2] - pulled);
        s += w * flat_norm2(pulled - G2[k2]);
    }
    rep.diff = std::sqrt(d);
    rep.scale = std::sqrt(s);
    return rep;
}

BootstrapReport bootstrap(const CoulombOperator& op, const std::vector<ModelPtr>& family, const CoulombOptions& opt)
{
    BootstrapReport rep;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& c : family) {
        auto r = coulomb_project(op, *c, opt);
        auto d = projected_distance(op, r, *c);
        BootstrapSample b{d.curv, d.conn, d.curv > 0 ? d.conn / d.curv : 0.0};
        rep.samples.push_back(b);
        rep.C = std::max(rep.C, b.ratio);
        lo = std::min(lo, b.ratio);
    }
    rep.spread = lo > 0 && std::isfinite(lo) ? rep.C / lo : 0.0;
    return rep;
}

double z_value(const ConnectionModel& c, const ConformalMap& phi, const CoulombOperator& op, const CoulombOptions& opt)
{
    auto pc = pullback(phi, std::make_shared<ConnectionModel>(c));
    auto r = coulomb_project(op, *pc, opt);
    auto d = projected_distance(op, r, *pc);
    return d.curv * d.curv + d.conn * d.conn;
}

ZReport minimize_conformal_distance(const ConnectionModel& c, const ZOptions& opt)
{
    if (!(opt.lambda_max >= 1.0) || !(opt.xi_max >= 0.0)) throw std::invalid_argument("Z search box is empty");
    CoulombOperator op(std::make_shared<Lattice4D>(opt.R, opt.n, 2));
    const double lmax = std::log(opt.lambda_max);
    ZReport rep;
    auto eval = [&](const std::vector<double>& x) {
        Quat xi(x[1], x[2], x[3], x[4]);
        if (std::fabs(x[0]) > lmax || norm(xi) > opt.xi_max) return std::numeric_limits<double>::infinity();
        ZProbe p{std::exp(x[0]), xi, 0.0, ""};
        try {
            p.Z = z_value(c, ConformalMap::affine(p.lambda, xi), op, opt.coulomb);
        } catch (const std::exception& e) {
            p.Z = std::numeric_limits<double>::infinity();
            p.note = std::string("skipped: ") + e.what();
        }
        rep.trace.push_back(p);
        ++rep.evaluations;
        return p.Z;
    };

    std::vector<double> x0(5, 0.0);
    rep.Z_identity = eval(x0);
    double best = rep.Z_identity;
    for (double l : {-0.5 * lmax, 0.0, 0.5 * lmax})
        for (int a = -1; a < 4; ++a)
            for (double sg : {-1.0, 1.0}) {
                if (a < 0 && (sg > 0 || l == 0.0)) continue;
                std::vector<double> x(5, 0.0);
                x[0] = l;
                if (a >= 0) x[1 + a] = sg * 0.5 * opt.xi_max;
                double z = eval(x);
                if (z < best) {
                    best = z;
                    x0 = x;
                }
            }
    double step = 0.25 * std::max(std::min(lmax, opt.xi_max), 1e-3);
    int left = std::max(opt.max_evals - rep.evaluations, 10);
    auto nm = nelder_mead(eval, x0, step, opt.x_tol, left);
    if (nm.f > best) {
        nm.x = x0;
        nm.f = best;
    }
    rep.lambda = std::exp(nm.x[0]);
    rep.xi = Quat(nm.x[1], nm.x[2], nm.x[3], nm.x[4]);
    rep.Z = nm.f;
    rep.best = ConformalMap::affine(rep.lambda, rep.xi);
    return rep;
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             double step, double x_tol, int max_evals)
{
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> s(d + 1, x0);
    std::vector<double> fv(d + 1);
    NelderMeadResult res;
    auto call = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };
    for (std::size_t k = 0; k < d; ++k) s[k + 1][k] += step;
    for (std::size_t k = 0; k <= d; ++k) fv[k] = call(s[k]);

    std::vector<std::size_t> idx(d + 1);
    while (true) {
        for (std::size_t k = 0; k <= d; ++k) idx[k] = k;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        double size = 0;
        for (std::size_t k = 1; k <= d; ++k)
            for (std::size_t j = 0; j < d; ++j) size = std::max(size, std::fabs(s[idx[k]][j] - s[idx[0]][j]));
        if (size <= x_tol || res.evaluations >= max_evals) break;

        std::vector<double> c(d, 0.0);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) c[j] += s[idx[k]][j] / double(d);
        auto along = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = c[j] + t * (s[idx[d]][j] - c[j]);
            return x;
        };
        const auto w = idx[d];
        auto xr = along(-1.0);
        double fr = call(xr);
        if (fr < fv[idx[0]]) {
            auto xe = along(-2.0);
            double fe = call(xe);
            if (fe < fr) {
                s[w] = xe;
                fv[w] = fe;
            } else {
                s[w] = xr;
                fv[w] = fr;
            }
        } else if (fr < fv[idx[d - 1]]) {
            s[w] = xr;
            fv[w] = fr;
        } else {
            bool outside = fr < fv[w];
            auto xc = along(outside ? -0.5 : 0.5);
            double fc = call(xc);
            if (fc < (outside ? fr : fv[w])) {
                s[w] = xc;
                fv[w] = fc;
            } else {
                for (std::size_t k = 1; k <= d; ++k) {
                    auto& x = s[idx[k]];
                    for (std::size_t j = 0; j < d; ++j) x[j] = s[idx[0]][j] + 0.5 * (x[j] - s[idx[0]][j]);
                    fv[idx[k]] = call(x);
                }
            }
        }
    }
    auto b = std::min_element(fv.begin(), fv.end()) - fv.begin();
    res.x = s[b];
    res.f = fv[b];
    return res;
}

} // namespace yma
