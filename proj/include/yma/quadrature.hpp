#pragma once

#include <functional>
#include <vector>

namespace yma {

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1], ascending
    std::vector<double> w;
};

// n-point Gauss-Legendre rule, cached per n.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre over consecutive panels [b_k, b_{k+1}].
double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& breaks, int n);

struct AdaptiveResult {
    double value = 0;
    double residual = 0;
    int nodes = 0;
};

// Doubles the per-panel node count from n0 until successive values agree to rel_tol
// (or n_max is reached). residual is the last difference.
AdaptiveResult integrate_doubling(const std::function<double(double)>& f, const std::vector<double>& breaks,
                                  double rel_tol, int n0 = 16, int n_max = 1024);

// Pairwise summation, deterministic for a given ordering.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

} // namespace yma
