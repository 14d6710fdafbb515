#pragma once

#include <vector>

#include "signet/ode.hpp"
#include "signet/rates.hpp"

namespace signet {

struct SolverOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
};

// Mean-field activation fraction a_hat(t), sampled at the accepted solver
// nodes; `dense` allows evaluation anywhere in [0, horizon].
struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    double rtol = 0, atol = 0;
    double horizon = 0;
    DenseSolution dense;

    double eval(double t) const { return dense.eval(t, 0); }
};

struct TriggerResult {
    bool reached = false;
    double tau_hat = 0;     // valid when reached
    double fixed_point = 0; // valid when !reached: the blocking equilibrium
    double gamma = 0;
};

// d a_hat/dt = (1 - a)*lambda(a) - a*mu(a)
double activation_rhs(const RatePair& rates, double a);

// default integration horizon: 50 / lambda(0), capped at 1e6
double default_horizon(const RatePair& rates);

Trajectory solve_activation(const RatePair& rates, double horizon,
                            const SolverOptions& opt = {});

// all roots of the rhs on [0,1]: sign-change scan on a 1e4 grid + bisection
std::vector<double> fixed_points(const RatePair& rates);

TriggerResult trigger_time(const RatePair& rates, double gamma, const SolverOptions& opt = {});

} // namespace signet
