#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "yma/energy.hpp"

namespace yma {

struct StepRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FlowNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discretized YM_{alpha,lambda} of a radial connection as a function of the profile
// values q_k = (1+s) f(s) at the interior Gauss-Legendre nodes (pole value pinned):
//   E_h = pi^2 sum_k w_k (1 - x_k^2) (3 + chi_k Phi_k)^alpha / chi_k,
//   Phi = 1.5 [(q - (1-x) q')^2 + q^2 (q (1-x) - 2)^2 / (1+x)^2] = |F|^2_g.
class RadialEnergy {
public:
    RadialEnergy(const RadialProfile& shape, double alpha, double lambda = 1.0);

    int size() const { return n_; }
    double energy(const std::vector<double>& q) const; // base() + excess(q)
    // E_h of the basic profile q = 1
    double base() const { return base_; }
    double excess(const std::vector<double>& q) const;
    // exact dE_h/dq_k
    std::vector<double> derivative(const std::vector<double>& q) const;
    // round L^2 mass of node k: ||delta Gamma||^2 = sum_k mass_k delta q_k^2
    double mass(int k) const { return mass_[k]; }
    // L^2 gradient dE_h/dq_k / mass_k
    std::vector<double> gradient(const std::vector<double>& q) const;
    double gradient_norm(const std::vector<double>& q) const;
    // (||Gamma - Gamma_basic||, ||F - F_basic||) by the same node quadrature
    std::pair<double, double> distance_to_basic(const std::vector<double>& q) const;

private:
    int n_;
    double alpha_, lambda_;
    double q_pole_;
    double base_ = 0;
    std::vector<double> x_, w_, chi_, mass_;
    std::vector<std::vector<double>> D_;
    double derivative_at(const std::vector<double>& q, int k) const;
};

struct FlowConfig {
    double alpha = 1.1;
    double lambda = 1.0;
    double dt_init = 1e-4;
    double dt_min = 1e-14;
    double dt_max = 1.0;
    double grow = 1.25;          // dt factor after an accepted step
    double slack = 0;            // accepted steps satisfy E(t+dt) <= E(t) + slack
    bool gradient_control = true; // also require the gradient norm not to increase
    double max_time = 500.0;
    double grad_tol = 1e-6;      // on the L^2 gradient norm
    double stall_tol = 1e-8;     // relative change of dist_conn over stall_window steps
    int stall_window = 100;
    int log_every = 200;
    long max_steps = 20'000'000;
    bool with_charge = true;
};

struct FlowSample {
    double t = 0, dt = 0, energy = 0, grad_norm = 0, dist_conn = 0, dist_curv = 0, charge = 0;
};

struct FlowState {
    RadialProfile profile;
    double t = 0;
    double dt = 0;
    double energy = 0;
    long steps = 0;
    long rejected = 0;
    bool converged = false;
    std::vector<FlowSample> trajectory;
};

FlowState initial_state(const RadialProfile& p, const FlowConfig& cfg);
// One accepted RK4 step of dq/dt = -Grad E_h; halves dt until the energy (and, with
// gradient_control, the gradient norm) does not increase.
FlowState flow_step(const FlowState& s, const FlowConfig& cfg);
// Converged once the gradient norm is below grad_tol and dist_conn has stalled (or the
// gradient is below grad_tol / 1000). Throws FlowNotConverged when max_time or max_steps is hit (the state is logged first).
FlowState run_flow(const RadialProfile& p0, const FlowConfig& cfg);
// c must be a radial model (radial profile or centred ADHM).
FlowState run_flow(const ConnectionModel& c0, const FlowConfig& cfg, int nodes = 16);

// Same but returns the final state with converged = false instead of throwing.
FlowState run_flow_nothrow(const RadialProfile& p0, const FlowConfig& cfg);

FlowSample sample_state(const FlowState& s, const FlowConfig& cfg);
std::string trajectory_csv(const std::vector<FlowSample>& tr);

// Radial profile 1 + eps * (1 + x)(1 - x) * g(x) with random low-degree g; pinned at the pole.
RadialProfile random_radial_perturbation(int nodes, double eps, std::uint64_t seed);

// (||c - basic||_{L^2}, ||F_c - F_basic||_{L^2}); radial quadrature for radial models,
// the chart lattice in opt.lattice otherwise.
std::pair<double, double> distance_to_basic(const ConnectionModel& c, const QuadOptions& opt = {});

} // namespace yma
