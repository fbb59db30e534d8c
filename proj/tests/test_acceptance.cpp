#include <doctest.h>

#include <set>

#include "yma/acceptance.hpp"

using namespace yma;

TEST_CASE("acceptance config parsing")
{
    auto c = parse_config("# comment\nseed = 7\nquad_tol=1e-12  # trailing\n\ncriteria = 3, 1,1\ntiming = true\n");
    CHECK(c.seed == 7);
    CHECK(c.quad_tol == 1e-12);
    CHECK(c.criteria == std::vector<int>{1, 3});
    CHECK(c.timing);
    CHECK(c.variational_n == AcceptanceConfig{}.variational_n);

    CHECK_THROWS_AS(parse_config("nonsense = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed = -3"), ConfigError);
    CHECK_THROWS_AS(parse_config("quad_tol = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("quad_tol = 1e-3x"), ConfigError);
    CHECK_THROWS_AS(parse_config("criteria = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("coulomb_n = 3"), ConfigError);
    CHECK_THROWS_AS(parse_config("timing = maybe"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/acceptance.cfg"), ConfigError);

    apply_override(c, "commutator_draws=10");
    CHECK(c.commutator_draws == 10);
    CHECK_THROWS_AS(apply_override(c, "commutator_draws"), ConfigError);
}

TEST_CASE("acceptance anchors")
{
    std::set<std::string> prefixes;
    for (const auto& [prefix, anchor] : anchor_map()) {
        CHECK(prefixes.insert(prefix).second);
        CHECK_FALSE(anchor.empty());
    }
    for (int k = 1; k <= 12; ++k) CHECK(std::string(criterion_title(k)) != "unknown");
}

TEST_CASE("acceptance report")
{
    AcceptanceConfig cfg;
    cfg.criteria = {1, 2};
    std::vector<int> seen;
    auto rep = run_acceptance(cfg, [&](const CriterionSummary& s) { seen.push_back(s.criterion); });
    CHECK(seen == std::vector<int>{1, 2});
    CHECK(rep.pass());
    for (const auto& c : rep.checks) {
        CHECK_FALSE(c.anchor.empty());
        CHECK(c.pass);
    }
    CHECK(criterion_line(rep.criteria[0]).rfind("PASS  criterion 1 (basic energy value): 4/4", 0) == 0);

    auto j1 = report_json(rep);
    auto j2 = report_json(run_acceptance(cfg));
    CHECK(j1 == j2);
    CHECK(j1.find("\"runtime\"") == std::string::npos);

    cfg.quad_tol = 1e-30;
    cfg.criteria = {1};
    auto bad = run_acceptance(cfg);
    CHECK_FALSE(bad.pass());
    CHECK(bad.criteria[0].failed == 4);

    bad.config.timing = true;
    CHECK(report_json(bad).find("\"runtime\"") != std::string::npos);
}
