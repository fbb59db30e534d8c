// Command-line driver over the C API.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "yma/capi.h"

namespace {

struct ModelArgs {
    std::vector<double> adhm;
    double perturb = -1;
    std::uint64_t seed = 1;
    int nodes = 16;
    std::vector<double> decorate;
};

void add_model_options(CLI::App* cmd, ModelArgs& m)
{
    cmd->add_option("--adhm", m.adhm, "ADHM instanton: 'xi lambda' (xi on the real axis) or 'x0 x1 x2 x3 lambda'")
        ->expected(2, 5);
    cmd->add_option("--perturb", m.perturb, "radial perturbation of the basic connection of this size")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", m.seed, "seed of the radial perturbation");
    cmd->add_option("--nodes", m.nodes, "profile nodes of the radial perturbation")->check(CLI::Range(4, 256));
    cmd->add_option("--decorate", m.decorate, "gauge bump 'rho a1 a2 a3' applied on top")->expected(4);
}

using ModelHandle = std::unique_ptr<yma_model, decltype(&yma_model_free)>;

int report(yma_status s)
{
    std::cerr << "error (" << yma_status_name(s) << "): " << yma_last_error() << "\n";
    return s == YMA_ERR_ARGUMENT || s == YMA_ERR_CONFIG ? 2 : 1;
}

// Builds the model; returns a nonzero exit code on failure.
int build_model(const ModelArgs& a, ModelHandle& out)
{
    yma_model* m = nullptr;
    yma_status s;
    if (!a.adhm.empty() && a.perturb >= 0) {
        std::cerr << "error: --adhm and --perturb are exclusive\n";
        return 2;
    }
    if (!a.adhm.empty()) {
        if (a.adhm.size() != 2 && a.adhm.size() != 5) {
            std::cerr << "error: --adhm takes 2 or 5 numbers\n";
            return 2;
        }
        double xi[4] = {a.adhm[0], 0, 0, 0};
        if (a.adhm.size() == 5)
            for (int k = 0; k < 4; ++k) xi[k] = a.adhm[k];
        double lambda = a.adhm.back();
        if (!(lambda >= 1.0 && lambda <= 1e4)) {
            std::cerr << "error: ADHM lambda must lie in [1, 1e4]\n";
            return 2;
        }
        s = yma_model_adhm(xi, lambda, &m);
    } else if (a.perturb >= 0) {
        s = yma_model_radial_perturbation(a.nodes, a.perturb, a.seed, &m);
    } else {
        s = yma_model_basic(&m);
    }
    if (s != YMA_OK) return report(s);
    out.reset(m);
    if (!a.decorate.empty()) {
        yma_model* d = nullptr;
        s = yma_model_gauge_bump(out.get(), a.decorate[0], a.decorate.data() + 1, &d);
        if (s != YMA_OK) return report(s);
        out.reset(d);
    }
    return 0;
}

// Writes text to path, or stdout for "" / "-".
int emit(const std::string& path, const char* text)
{
    std::string t(text);
    if (!t.empty() && t.back() != '\n') t += '\n';
    if (path.empty() || path == "-") {
        std::fputs(t.c_str(), stdout);
        return 0;
    }
    std::ofstream out(path);
    out << t;
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    return 0;
}

struct Owned {
    char* p = nullptr;
    ~Owned() { yma_string_free(p); }
};

std::vector<double> parse_grid(const std::string& spec)
{
    double a, b;
    int n;
    char c1, c2, extra;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || (is >> extra))
        throw CLI::ValidationError("--lambda-grid", "expected a:b:n");
    if (n < 1 || !(a >= 1.0) || !(b <= 1e4) || !(a <= b))
        throw CLI::ValidationError("--lambda-grid", "need 1 <= a <= b <= 1e4 and n >= 1");
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
    return g;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"yma: alpha-Yang-Mills energies near the basic instanton"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(yma_version()));

    // verify
    std::string config, report_path;
    std::vector<std::string> overrides;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite, exit 0 iff every check passes");
    verify->add_option("config", config, "key = value config file");
    verify->add_option("--set", overrides, "key=value override, repeatable");
    verify->add_option("--report", report_path, "JSON report path (overrides the config)");

    // energy
    double alpha = 1.0, lambda = 1.0, rel_tol = 0;
    ModelArgs model;
    auto* energy = app.add_subcommand("energy", "YM_{alpha,lambda} of a connection as JSON");
    energy->add_option("--alpha", alpha, "exponent alpha")->check(CLI::Range(1.0, 2.0));
    energy->add_option("--lambda", lambda, "dilation weight lambda")->check(CLI::Range(1.0, 1e4));
    energy->add_option("--rel-tol", rel_tol, "quadrature doubling tolerance")->check(CLI::PositiveNumber);
    add_model_options(energy, model);

    // charge
    auto* charge = app.add_subcommand("charge", "topological charge of a connection as JSON");
    charge->add_option("--rel-tol", rel_tol, "quadrature doubling tolerance")->check(CLI::PositiveNumber);
    add_model_options(charge, model);

    // profile
    std::string grid = "1:10:10", out_path;
    auto* profile = app.add_subcommand("profile", "dilation profile CSV over an evenly spaced lambda grid");
    profile->add_option("--alpha", alpha, "exponent alpha")->check(CLI::Range(1.0, 2.0));
    profile->add_option("--lambda-grid", grid, "a:b:n, n evenly spaced values from a to b");
    profile->add_option("-o,--out", out_path, "output file (default stdout)");

    // flow
    double perturb = 0.05;
    std::uint64_t seed = 1;
    int nodes = 16, log_every = 200;
    auto* flow = app.add_subcommand("flow", "alpha-flow trajectory CSV from a radial perturbation");
    flow->add_option("--alpha", alpha, "exponent alpha")->check(CLI::Range(1.0, 2.0));
    flow->add_option("--perturb", perturb, "size of the radial perturbation")->check(CLI::Range(0.0, 1.0));
    flow->add_option("--seed", seed, "perturbation seed");
    flow->add_option("--nodes", nodes, "profile nodes")->check(CLI::Range(4, 256));
    flow->add_option("--log-every", log_every, "accepted steps between trajectory rows")->check(CLI::PositiveNumber);
    flow->add_option("-o,--out", out_path, "output file (default stdout)");

    // gaugefix
    double R = 3.0, tol = 1e-9;
    int n = 17;
    auto* gaugefix = app.add_subcommand("gaugefix", "Coulomb projection run log CSV");
    add_model_options(gaugefix, model);
    gaugefix->add_option("--R", R, "chart ball radius")->check(CLI::PositiveNumber);
    gaugefix->add_option("--n", n, "lattice nodes per axis")->check(CLI::Range(5, 129));
    gaugefix->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
    gaugefix->add_option("-o,--out", out_path, "output file (default stdout)");

    std::vector<double> lambdas;
    try {
        app.parse(argc, argv);
        if (profile->parsed()) lambdas = parse_grid(grid);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (verify->parsed()) {
        if (!config.empty()) {
            std::ifstream probe(config);
            if (!probe) {
                std::cerr << "error: cannot read config file " << config << "\n";
                return 2;
            }
        }
        std::vector<const char*> ov;
        for (const auto& s : overrides) ov.push_back(s.c_str());
        int all_pass = 0;
        auto s = yma_verify(config.empty() ? nullptr : config.c_str(), ov.data(), ov.size(),
                            report_path.empty() ? nullptr : report_path.c_str(),
                            [](const char* line, void*) { std::printf("%s\n", line), std::fflush(stdout); }, nullptr,
                            &all_pass);
        if (s == YMA_ERR_CONFIG) {
            std::cerr << "error: " << yma_last_error() << "\n";
            return 2;
        }
        if (s != YMA_OK) return report(s);
        return all_pass ? 0 : 1;
    }

    if (energy->parsed() || charge->parsed() || gaugefix->parsed()) {
        ModelHandle m(nullptr, yma_model_free);
        if (int rc = build_model(model, m)) return rc;
        Owned text;
        yma_status s;
        if (energy->parsed()) {
            s = yma_energy_json(m.get(), alpha, lambda, rel_tol, &text.p);
        } else if (charge->parsed()) {
            double q = 0, res = 0;
            s = yma_charge(m.get(), rel_tol, &q, &res);
            if (s == YMA_OK) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "{\"kind\": \"%s\", \"charge\": %.17g, \"residual\": %.3g}\n",
                              yma_model_kind(m.get()), q, res);
                std::fputs(buf, stdout);
                return 0;
            }
        } else {
            double res = 0;
            s = yma_gaugefix_csv(m.get(), R, n, tol, &text.p, &res);
        }
        if (s != YMA_OK) return report(s);
        return emit(out_path, text.p);
    }

    Owned text;
    yma_status s;
    if (profile->parsed()) {
        s = yma_profile_csv(alpha, lambdas.data(), lambdas.size(), &text.p);
    } else {
        int converged = 0;
        s = yma_flow_csv(alpha, perturb, seed, nodes, log_every, &text.p, &converged);
        if (s == YMA_OK && !converged) std::cerr << "warning: flow stopped before convergence\n";
    }
    if (s != YMA_OK) return report(s);
    return emit(out_path, text.p);
}
