#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "yma/capi.h"

namespace {

struct Model {
    yma_model* p = nullptr;
    ~Model() { yma_model_free(p); }
};

struct Text {
    char* p = nullptr;
    ~Text() { yma_string_free(p); }
};

} // namespace

TEST_CASE("c api models and energies")
{
    CHECK(std::string(yma_version()).size() > 0);
    Model basic;
    REQUIRE(yma_model_basic(&basic.p) == YMA_OK);
    CHECK(std::string(yma_model_kind(basic.p)) == "adhm");
    CHECK(std::string(yma_last_error()).empty());

    double v = 0, res = -1;
    REQUIRE(yma_energy(basic.p, 1.5, 1.0, 0, &v, &res) == YMA_OK);
    CHECK(std::fabs(v - std::pow(6.0, 1.5) * 4.0 / 3.0 * M_PI * M_PI) < 1e-10 * v);
    CHECK(res >= 0);

    Text j;
    REQUIRE(yma_energy_json(basic.p, 1.0, 2.0, 0, &j.p) == YMA_OK);
    CHECK(std::string(j.p).find("\"value\"") != std::string::npos);

    double xi[4] = {0.1, 0.0, -0.2, 0.0};
    Model a;
    REQUIRE(yma_model_adhm(xi, 1.3, &a.p) == YMA_OK);
    double q = 0;
    REQUIRE(yma_charge(a.p, 0, &q, nullptr) == YMA_OK);
    CHECK(std::fabs(q - 1) < 1e-8);

    Model r;
    REQUIRE(yma_model_radial_perturbation(12, 0.05, 7, &r.p) == YMA_OK);
    CHECK(std::string(yma_model_kind(r.p)) == "radial");
    double amp[3] = {0.2, 0.0, 0.1};
    Model g;
    REQUIRE(yma_model_gauge_bump(r.p, 1.5, amp, &g.p) == YMA_OK);
    double e1 = 0, e2 = 0;
    REQUIRE(yma_energy(r.p, 1.0, 1.0, 0, &e1, nullptr) == YMA_OK);
    REQUIRE(yma_energy(g.p, 1.0, 1.0, 0, &e2, nullptr) == YMA_OK);
    CHECK(std::fabs(e1 - e2) < 1e-6 * e1);
}

TEST_CASE("c api errors")
{
    Model m;
    CHECK(yma_model_adhm(nullptr, -1.0, &m.p) == YMA_ERR_ARGUMENT);
    CHECK(m.p == nullptr);
    CHECK(std::string(yma_last_error()).find("lambda") != std::string::npos);
    CHECK(yma_model_basic(nullptr) == YMA_ERR_ARGUMENT);

    REQUIRE(yma_model_basic(&m.p) == YMA_OK);
    double v = 0;
    CHECK(yma_energy(m.p, 0.5, 1.0, 0, &v, nullptr) == YMA_ERR_ARGUMENT);
    CHECK(yma_energy(nullptr, 1.0, 1.0, 0, &v, nullptr) == YMA_ERR_ARGUMENT);
    CHECK(std::string(yma_status_name(YMA_ERR_CONVERGENCE)) == "convergence");

    int pass = -1;
    CHECK(yma_verify("/nonexistent/config", nullptr, 0, nullptr, nullptr, nullptr, &pass) == YMA_ERR_CONFIG);
    const char* bad[] = {"criteria=13"};
    CHECK(yma_verify(nullptr, bad, 1, nullptr, nullptr, nullptr, &pass) == YMA_ERR_CONFIG);
    CHECK(pass == -1);
}

TEST_CASE("c api csv outputs")
{
    double lambdas[3] = {1.0, 2.0, 5.0};
    Text p;
    REQUIRE(yma_profile_csv(1.3, lambdas, 3, &p.p) == YMA_OK);
    std::string csv(p.p);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 4);

    Text f;
    int conv = 0;
    REQUIRE(yma_flow_csv(1.1, 0.02, 3, 12, 500, &f.p, &conv) == YMA_OK);
    CHECK(conv == 1);
    CHECK(std::string(f.p).rfind("t,dt,energy,", 0) == 0);

    Model b;
    REQUIRE(yma_model_basic(&b.p) == YMA_OK);
    Text c;
    double res = -1;
    REQUIRE(yma_gaugefix_csv(b.p, 3.0, 9, 1e-9, &c.p, &res) == YMA_OK);
    CHECK(res == 0.0);
    CHECK(std::string(c.p).rfind("outer_iter,residual,cg_iters,sigma_sup_norm\n", 0) == 0);

    std::vector<std::string> lines_seen;
    const char* ov[] = {"criteria=1"};
    int pass = 0;
    std::string report = "capi_report.json";
    REQUIRE(yma_verify(nullptr, ov, 1, report.c_str(),
                       [](const char* line, void* u) { static_cast<std::vector<std::string>*>(u)->push_back(line); },
                       &lines_seen, &pass) == YMA_OK);
    CHECK(pass == 1);
    REQUIRE(lines_seen.size() == 1);
    CHECK(lines_seen[0].rfind("PASS  criterion 1", 0) == 0);
    std::remove(report.c_str());
}
