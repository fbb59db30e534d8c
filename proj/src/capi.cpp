#include "yma/capi.h"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <fstream>
#include <string>

#include "yma/acceptance.hpp"
#include "yma/coulomb.hpp"
#include "yma/dilation.hpp"
#include "yma/flow.hpp"
#include "yma/io.hpp"

struct yma_model {
    yma::ModelPtr ptr;
    std::string kind;
};

namespace {

thread_local std::string g_error;

yma_status fail(yma_status s, const std::string& what)
{
    g_error = what;
    return s;
}

// Runs f, mapping library exceptions onto status codes.
template <class F>
yma_status guarded(F&& f)
{
    try {
        f();
        g_error.clear();
        return YMA_OK;
    } catch (const yma::ConfigError& e) {
        return fail(YMA_ERR_CONFIG, e.what());
    } catch (const yma::IoError& e) {
        return fail(YMA_ERR_IO, e.what());
    } catch (const yma::QuadratureNotConverged& e) {
        return fail(YMA_ERR_QUADRATURE, e.what());
    } catch (const yma::CoulombDiverged& e) {
        return fail(YMA_ERR_CONVERGENCE, e.what());
    } catch (const yma::CoulombMaxOuter& e) {
        return fail(YMA_ERR_CONVERGENCE, e.what());
    } catch (const yma::CgNotConverged& e) {
        return fail(YMA_ERR_CONVERGENCE, e.what());
    } catch (const yma::FlowNotConverged& e) {
        return fail(YMA_ERR_CONVERGENCE, e.what());
    } catch (const yma::StepRejected& e) {
        return fail(YMA_ERR_CONVERGENCE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(YMA_ERR_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(YMA_ERR_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(YMA_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(YMA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(YMA_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void need(bool ok, const char* what)
{
    if (!ok) throw std::invalid_argument(what);
}

yma_model* wrap(yma::ModelPtr p)
{
    auto* m = new yma_model;
    m->kind = p->kind();
    m->ptr = std::move(p);
    return m;
}

yma::QuadOptions quad(double rel_tol)
{
    yma::QuadOptions o;
    if (rel_tol > 0) o.rel_tol = rel_tol;
    return o;
}

} // namespace

extern "C" {

const char* yma_version(void) { return yma::kLibraryVersion; }

const char* yma_last_error(void) { return g_error.c_str(); }

const char* yma_status_name(yma_status s)
{
    switch (s) {
    case YMA_OK: return "ok";
    case YMA_ERR_ARGUMENT: return "argument";
    case YMA_ERR_QUADRATURE: return "quadrature";
    case YMA_ERR_CONVERGENCE: return "convergence";
    case YMA_ERR_IO: return "io";
    case YMA_ERR_CONFIG: return "config";
    case YMA_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void yma_string_free(char* s) { std::free(s); }

yma_status yma_model_basic(yma_model** out)
{
    return guarded([&] {
        need(out, "yma_model_basic: out is null");
        *out = wrap(yma::ConnectionModel::basic());
    });
}

yma_status yma_model_adhm(const double xi[4], double lambda, yma_model** out)
{
    return guarded([&] {
        need(out, "yma_model_adhm: out is null");
        yma::Quat q = xi ? yma::Quat(xi[0], xi[1], xi[2], xi[3]) : yma::Quat(0.0);
        *out = wrap(yma::ConnectionModel::adhm(q, lambda));
    });
}

yma_status yma_model_radial_perturbation(int nodes, double eps, uint64_t seed, yma_model** out)
{
    return guarded([&] {
        need(out, "yma_model_radial_perturbation: out is null");
        need(nodes >= 4, "yma_model_radial_perturbation: nodes must be at least 4");
        *out = wrap(yma::ConnectionModel::radial(yma::random_radial_perturbation(nodes, eps, seed)));
    });
}

yma_status yma_model_gauge_bump(const yma_model* base, double rho, const double amp[3], yma_model** out)
{
    return guarded([&] {
        need(base && amp && out, "yma_model_gauge_bump: null argument");
        need(rho > 0, "yma_model_gauge_bump: rho must be positive");
        auto t = yma::GaugeTransform::bump(yma::Quat(0.0), rho, yma::ImQ{amp[0], amp[1], amp[2]});
        *out = wrap(yma::gauge_act(t, base->ptr));
    });
}

void yma_model_free(yma_model* m) { delete m; }

const char* yma_model_kind(const yma_model* m) { return m ? m->kind.c_str() : ""; }

yma_status yma_energy(const yma_model* m, double alpha, double lambda, double rel_tol, double* value, double* residual)
{
    return guarded([&] {
        need(m && value, "yma_energy: null argument");
        auto r = yma::ym_alpha_lambda(*m->ptr, alpha, lambda, quad(rel_tol));
        *value = r.value;
        if (residual) *residual = r.residual;
    });
}

yma_status yma_energy_json(const yma_model* m, double alpha, double lambda, double rel_tol, char** json)
{
    return guarded([&] {
        need(m && json, "yma_energy_json: null argument");
        *json = dup_string(yma::to_json(yma::ym_alpha_lambda(*m->ptr, alpha, lambda, quad(rel_tol))));
    });
}

yma_status yma_charge(const yma_model* m, double rel_tol, double* value, double* residual)
{
    return guarded([&] {
        need(m && value, "yma_charge: null argument");
        auto r = yma::topological_charge_report(*m->ptr, quad(rel_tol));
        *value = r.value;
        if (residual) *residual = r.residual;
    });
}

yma_status yma_profile_csv(double alpha, const double* lambdas, size_t n, char** csv)
{
    return guarded([&] {
        need(csv && (lambdas || n == 0), "yma_profile_csv: null argument");
        std::vector<yma::ProfilePoint> pts;
        for (size_t k = 0; k < n; ++k) pts.push_back(yma::profile_point(alpha, lambdas[k]));
        *csv = dup_string(yma::profile_csv(pts));
    });
}

yma_status yma_flow_csv(double alpha, double eps, uint64_t seed, int nodes, int log_every, char** csv, int* converged)
{
    return guarded([&] {
        need(csv, "yma_flow_csv: null argument");
        need(nodes >= 4, "yma_flow_csv: nodes must be at least 4");
        need(log_every >= 1, "yma_flow_csv: log_every must be positive");
        yma::FlowConfig cfg;
        cfg.alpha = alpha;
        cfg.log_every = log_every;
        auto st = yma::run_flow_nothrow(yma::random_radial_perturbation(nodes, eps, seed), cfg);
        *csv = dup_string(yma::trajectory_csv(st.trajectory));
        if (converged) *converged = st.converged ? 1 : 0;
    });
}

yma_status yma_gaugefix_csv(const yma_model* m, double R, int n, double tol, char** csv, double* residual)
{
    return guarded([&] {
        need(m && csv, "yma_gaugefix_csv: null argument");
        need(R > 0 && n >= 5 && tol > 0, "yma_gaugefix_csv: need R > 0, n >= 5, tol > 0");
        yma::CoulombOperator op(std::make_shared<yma::Lattice4D>(R, n, 2));
        yma::CoulombOptions opt;
        opt.tol = tol;
        auto r = yma::coulomb_project(op, *m->ptr, opt);
        *csv = dup_string(yma::coulomb_csv(r));
        if (residual) *residual = r.residual.back();
    });
}

yma_status yma_verify(const char* config_path, const char* const* overrides, size_t n_overrides,
                      const char* report_path, yma_line_callback on_line, void* user, int* all_pass)
{
    return guarded([&] {
        need(all_pass && (overrides || n_overrides == 0), "yma_verify: null argument");
        yma::AcceptanceConfig cfg;
        if (config_path) cfg = yma::load_config(config_path);
        for (size_t k = 0; k < n_overrides; ++k) yma::apply_override(cfg, overrides[k]);
        if (report_path) cfg.report = report_path;
        if (!cfg.report.empty()) {
            std::ofstream probe(cfg.report);
            if (!probe) throw yma::IoError("cannot write report " + cfg.report);
        }
        auto rep = yma::run_acceptance(cfg, [&](const yma::CriterionSummary& s) {
            if (on_line) on_line(yma::criterion_line(s).c_str(), user);
        });
        if (!cfg.report.empty()) {
            std::ofstream out(cfg.report);
            out << yma::report_json(rep);
            if (!out) throw yma::IoError("cannot write report " + cfg.report);
        }
        *all_pass = rep.pass() ? 1 : 0;
    });
}

} // extern "C"
