#include "signet/meanfield.hpp"

#include <algorithm>
#include <cmath>

namespace signet {

namespace {

double rhs_clamped(const RatePair& rates, double a) {
    const double ac = std::clamp(a, 0.0, 1.0);
    return (1.0 - ac) * rates.lambda.eval_raw(ac) - ac * rates.mu.eval_raw(ac);
}

} // namespace

double activation_rhs(const RatePair& rates, double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw domain_error("activation fraction outside [0,1]");
    return (1.0 - a) * rates.lambda(a) - a * rates.mu(a);
}

double default_horizon(const RatePair& rates) {
    return std::min(50.0 / rates.lambda.eval_raw(0.0), 1e6);
}

Trajectory solve_activation(const RatePair& rates, double horizon, const SolverOptions& opt) {
    if (!(horizon > 0.0)) throw spec_error("horizon must be positive");
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw spec_error("tolerances must be positive");

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const double y0[1] = {0.0};
    auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = rhs_clamped(rates, y[0]);
    };
    DenseSolution sol = integrate_dense(rhs, std::span<const double>(y0, 1), 0.0, horizon, oo);

    Trajectory traj;
    traj.rtol = opt.rtol;
    traj.atol = opt.atol;
    traj.horizon = horizon;
    traj.times = sol.times();
    traj.values.resize(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) traj.values[i] = sol.node(i, 0);
    traj.dense = std::move(sol);

    // [0,1] bounds: tolerate only sub-atol overshoot, then clamp
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        double& v = traj.values[i];
        if (v < 0.0 || v > 1.0) {
            const double over = v < 0.0 ? -v : v - 1.0;
            if (over >= opt.atol)
                throw numerical_failure("activation fraction left [0,1]", traj.times[i]);
            v = std::clamp(v, 0.0, 1.0);
        }
    }
    // the exact flow from 0 is monotone; repair sub-tolerance wiggle, reject worse
    for (std::size_t i = 1; i < traj.values.size(); ++i) {
        if (traj.values[i] < traj.values[i - 1]) {
            if (traj.values[i - 1] - traj.values[i] > 1e-6)
                throw numerical_failure("activation trajectory lost monotonicity",
                                        traj.times[i]);
            traj.values[i] = traj.values[i - 1];
        }
    }
    return traj;
}

std::vector<double> fixed_points(const RatePair& rates) {
    const int grid = 10'000;
    auto f = [&](double a) { return rhs_clamped(rates, a); };
    std::vector<double> roots;
    double x0 = 0.0, f0 = f(0.0);
    for (int i = 1; i <= grid; ++i) {
        const double x1 = static_cast<double>(i) / grid;
        const double f1 = f(x1);
        if ((f0 > 0.0 && f1 <= 0.0) || (f0 < 0.0 && f1 >= 0.0)) {
            const double r = bisect(f, x0, x1, 1e-12);
            if (roots.empty() || r - roots.back() > 1e-9) roots.push_back(r);
        } else if (f0 == 0.0 && (roots.empty() || x0 - roots.back() > 1e-9)) {
            roots.push_back(x0);
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

TriggerResult trigger_time(const RatePair& rates, double gamma, const SolverOptions& opt) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw spec_error("gamma must lie in (0,1)");

    const std::vector<double> fps = fixed_points(rates);
    const double a_star = fps.front();
    if (a_star <= gamma - opt.atol) {
        TriggerResult r;
        r.reached = false;
        r.fixed_point = a_star;
        r.gamma = gamma;
        return r;
    }

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = rhs_clamped(rates, y[0]);
    };

    double t = 0.0, a = 0.0;
    double chunk = default_horizon(rates);
    const double t_cap = 1e9;
    while (t < t_cap) {
        const double y0[1] = {a};
        bool crossed = false;
        double cross_t0 = 0, cross_t1 = 0;
        DenseSolution sol;
        {
            auto watch = [&](const StepInterpolant& s) {
                if (s.eval(s.t1(), 0) >= gamma) {
                    crossed = true;
                    cross_t0 = s.t0();
                    cross_t1 = s.t1();
                    return StepVerdict::stop;
                }
                return StepVerdict::proceed;
            };
            sol = integrate_dense(rhs, std::span<const double>(y0, 1), t, t + chunk, oo, watch);
        }
        if (crossed) {
            const auto step = sol.step(sol.step_count() - 1);
            const double tol = 1e-9 * std::max(1.0, cross_t1);
            const double tau =
                bisect([&](double tt) { return step.eval(tt, 0) - gamma; }, cross_t0, cross_t1,
                       tol);
            TriggerResult r;
            r.reached = true;
            r.tau_hat = tau;
            r.gamma = gamma;
            return r;
        }
        t = sol.t_end();
        a = sol.node(sol.step_count(), 0);
        chunk *= 2.0;
    }
    throw numerical_failure("threshold crossing not found below time cap", t_cap);
}

} // namespace signet
