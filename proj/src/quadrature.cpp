#include "yma/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace yma {

namespace {

GaussRule build_rule(int n)
{
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1; }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
        }
        double w = 2.0 / ((1 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    return cache.emplace(n, build_rule(n)).first->second;
}

double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& breaks, int n)
{
    const GaussRule& g = gauss_legendre(n);
    std::vector<double> terms;
    terms.reserve((breaks.size() - 1) * n);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        double a = breaks[p], b = breaks[p + 1];
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int k = 0; k < n; ++k) terms.push_back(h * g.w[k] * f(c + h * g.x[k]));
    }
    return pairwise_sum(terms);
}

AdaptiveResult integrate_doubling(const std::function<double(double)>& f, const std::vector<double>& breaks,
                                  double rel_tol, int n0, int n_max)
{
    AdaptiveResult r;
    int n = n0;
    double prev = integrate_panels(f, breaks, n);
    for (;;) {
        int n2 = 2 * n;
        double cur = integrate_panels(f, breaks, n2);
        r.value = cur;
        r.residual = std::fabs(cur - prev);
        r.nodes = n2 * static_cast<int>(breaks.size() - 1);
        if (r.residual <= rel_tol * std::fabs(cur) || n2 >= n_max) break;
        prev = cur;
        n = n2;
    }
    return r;
}

double pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t m = n / 2;
    return pairwise_sum(v, m) + pairwise_sum(v + m, n - m);
}

} // namespace yma
