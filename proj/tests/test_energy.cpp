#include <doctest.h>

#include "yma/energy.hpp"
#include "yma/rng.hpp"

using namespace yma;

namespace {
bool rel_close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }
} // namespace

TEST_CASE("Yang-Mills energy of ADHM connections")
{
    auto basic = ConnectionModel::basic();
    CHECK(rel_close(ym_energy(*basic).value, 4 * M_PI * M_PI, 1e-12));
    CHECK(std::fabs(ym_energy(*ConnectionModel::flat()).value) < 1e-14);
    Rng rng(41);
    for (int n = 0; n < 3; ++n) {
        auto c = ConnectionModel::adhm(rng.quat(0.3), rng.uniform(0.7, 1.4));
        auto r = ym_energy(*c);
        CHECK(r.grid.rfind("sphere", 0) == 0);
        CHECK(rel_close(r.value, 4 * M_PI * M_PI, 1e-8));
    }
}

TEST_CASE("alpha energy")
{
    auto basic = ConnectionModel::basic();
    for (double a : {1.0, 1.1, 1.5, 2.0}) CHECK(rel_close(ym_alpha(*basic, a).value, basic_energy(a), 1e-12));
    CHECK(rel_close(ym_alpha(*ConnectionModel::flat(), 1.0).value, 4 * M_PI * M_PI, 1e-12));
    CHECK_THROWS_AS(ym_alpha(*basic, 0.5), std::invalid_argument);

    auto c = ConnectionModel::radial(RadialProfile::from_function(32, [](double s) { return (1 + 0.4 * std::exp(-s)) / (1 + s); }));
    double prev = 0;
    for (double a = 1.0; a <= 2.0001; a += 0.1) {
        double e = ym_alpha(*c, a).value;
        CHECK(e >= basic_energy(a) - 1e-6);
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("lambda-twisted alpha energy")
{
    auto basic = ConnectionModel::basic();
    auto c = ConnectionModel::radial(RadialProfile::from_function(32, [](double s) { return (1 + 0.3 * s * std::exp(-s)) / (1 + s); }));
    CHECK(rel_close(ym_alpha_lambda(*c, 1.3, 1.0).value, ym_alpha(*c, 1.3).value, 1e-13));
    for (double l : {2.0, 5.0}) {
        auto p = pullback(ConformalMap::dilation(l), basic);
        CHECK(rel_close(ym_alpha_lambda(*p, 1.3, l).value, ym_alpha(*basic, 1.3).value, 1e-10));
        CHECK(rel_close(ym_alpha_lambda(*basic, 1.3, l).value, ym_alpha_lambda(*basic, 1.3, 1.0 / l).value, 1e-10));
    }
}

TEST_CASE("topological charge")
{
    auto basic = ConnectionModel::basic();
    auto q = topological_charge_report(*basic);
    CHECK(std::fabs(q.value - 1.0) < 1e-10);
    CHECK(std::fabs(q.wedge_value - 1.0) < 1e-10);
    CHECK(std::fabs(topological_charge(*ConnectionModel::flat())) < 1e-14);
    CHECK(std::fabs(topological_charge(*pullback(ConformalMap::dilation(3.0), basic)) - 1.0) < 1e-8);
    auto f = ConnectionModel::radial(RadialProfile::from_function(32, [](double s) { return (1 + 0.5 * s * std::exp(-s)) / (1 + s); }));
    auto qf = topological_charge_report(*f);
    CHECK(std::fabs(qf.value - 1.0) < 1e-8);
    CHECK(std::fabs(qf.wedge_value - qf.value) < 1e-10);
    CHECK(self_dual_norm(*basic) < 1e-8);
}

TEST_CASE("curvature Lp norms")
{
    auto basic = ConnectionModel::basic();
    CHECK(rel_close(lp_curvature_norm(*basic, 2), std::sqrt(8 * M_PI * M_PI), 1e-12));
    CHECK(rel_close(lp_curvature_norm(*basic, 4), std::pow(24 * M_PI * M_PI, 0.25), 1e-12));
    CHECK(lp_difference_norm(*basic, *basic, 2) == 0.0);
    auto a = ConnectionModel::adhm(Quat(0.0), 1.2);
    CHECK(lp_difference_norm(*a, *basic, 2) > 0.1);
}

TEST_CASE("gauge and conformal invariance of energies")
{
    auto basic = ConnectionModel::basic();
    auto t = GaugeTransform::bump(Quat(0.3, 0, 0, 0), 1.2, ImQ{0.9, 0.2, -0.5});
    auto g = gauge_act(t, basic);
    QuadOptions o;
    o.rel_tol = 1e-10;
    auto eg = ym_alpha(*g, 1.5, o);
    CHECK(std::fabs(eg.value - basic_energy(1.5)) <= std::max(eg.residual, 1e-9 * basic_energy(1.5)));

    Rng rng(42);
    auto c = ConnectionModel::radial(RadialProfile::from_function(32, [](double s) { return (1 + 0.4 * std::exp(-s)) / (1 + s); }));
    double e0 = ym_energy(*c).value;
    CHECK(rel_close(ym_energy(*pullback(ConformalMap::dilation(2.5), c)).value, e0, 1e-10));
    CHECK(rel_close(ym_energy(*pullback(ConformalMap::rotation(rng.unit_quat(), rng.unit_quat()), c)).value, e0, 1e-10));
}
