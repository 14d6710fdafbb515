#include "signet/keychain.hpp"

#include <algorithm>
#include <cmath>

namespace signet {

namespace {

void check_mode(int k, ChainMode mode) {
    if (k < 1) throw invalid_k("k must be >= 1");
    if (mode == ChainMode::literal_k1 && k != 1)
        throw mode_error("literal-k1 mode is only defined for k = 1");
}

// RHS of the joint system y = [a_hat, p_0..p_k, cum_survival]
struct JointRhs {
    const RatePair& rates;
    int k;
    ChainMode mode;

    void operator()(double, std::span<const double> y, std::span<double> dy) const {
        const double a = std::clamp(y[0], 0.0, 1.0);
        const double lam = rates.lambda.eval_raw(a);
        const double mu = rates.mu.eval_raw(a);
        dy[0] = (1.0 - a) * lam - a * mu;

        const double* p = y.data() + 1;
        double* dp = dy.data() + 1;
        if (mode == ChainMode::literal_k1) {
            dp[0] = mu * p[1] - lam * p[0];
            dp[1] = lam * p[0];
        } else {
            for (int j = 0; j <= k; ++j) dp[j] = 0.0;
            for (int i = 0; i < k; ++i) {
                const double up = (k - i) * lam * p[i];
                dp[i] -= up;
                dp[i + 1] += up;
            }
            for (int i = 1; i < k; ++i) {
                const double down = i * mu * p[i];
                dp[i] -= down;
                dp[i - 1] += down;
            }
        }
        dy[k + 2] = 1.0 - p[k];
    }
};

std::vector<double> initial_state(int k) {
    std::vector<double> y(static_cast<std::size_t>(k) + 3, 0.0);
    y[1] = 1.0; // p_0(0) = 1
    return y;
}

double scan_extreme(const RateSpec& f, bool want_min) {
    double best = f.eval_raw(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = f.eval_raw(i / 1000.0);
        best = want_min ? std::min(best, v) : std::max(best, v);
    }
    return best;
}

} // namespace

std::vector<double> build_generator(int k, double lam, double mu, ChainMode mode) {
    check_mode(k, mode);
    if (!(lam > 0.0) || !(mu > 0.0)) throw spec_error("generator rates must be positive");
    const std::size_t n = static_cast<std::size_t>(k) + 1;
    std::vector<double> q(n * n, 0.0);
    if (mode == ChainMode::literal_k1) {
        q[0 * n + 0] = -lam;
        q[0 * n + 1] = lam;
        q[1 * n + 0] = mu; // return flow kept, no balancing diagonal: mass grows
        q[1 * n + 1] = 0.0;
        return q;
    }
    for (int i = 0; i < k; ++i) {
        const double up = (k - i) * lam;
        const double down = i * mu;
        q[static_cast<std::size_t>(i) * n + i + 1] = up;
        if (i > 0) q[static_cast<std::size_t>(i) * n + i - 1] = down;
        q[static_cast<std::size_t>(i) * n + i] = -(up + down);
    }
    // row k stays zero: absorbing
    return q;
}

OccupancyTrajectory solve_occupancy(const RatePair& rates, int k, double horizon,
                                    const SolverOptions& opt, ChainMode mode) {
    check_mode(k, mode);
    if (!(horizon > 0.0)) throw spec_error("horizon must be positive");

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const JointRhs rhs{rates, k, mode};
    const std::vector<double> y0 = initial_state(k);
    DenseSolution sol = integrate_dense(rhs, std::span<const double>(y0), 0.0, horizon, oo);

    OccupancyTrajectory tr;
    tr.k = k;
    tr.mode = mode;
    tr.rtol = opt.rtol;
    tr.atol = opt.atol;
    tr.times = sol.times();
    const std::size_t m = tr.times.size();
    tr.p.resize(m * (static_cast<std::size_t>(k) + 1));
    tr.cum_survival.resize(m);
    tr.a_hat.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        tr.a_hat[i] = sol.node(i, 0);
        tr.cum_survival[i] = sol.node(i, static_cast<std::size_t>(k) + 2);
        for (int j = 0; j <= k; ++j) {
            double v = sol.node(i, static_cast<std::size_t>(j) + 1);
            if (mode == ChainMode::absorbing) {
                if (v < -1e-10 || v > 1.0 + 1e-10)
                    throw numerical_failure("occupancy left [0,1]", tr.times[i]);
                v = std::clamp(v, 0.0, 1.0);
            }
            tr.p[i * (static_cast<std::size_t>(k) + 1) + static_cast<std::size_t>(j)] = v;
        }
    }
    if (mode == ChainMode::absorbing) {
        for (std::size_t i = 0; i < m; ++i) {
            double sum = 0.0;
            for (int j = 0; j <= k; ++j) sum += tr.p_at(i, j);
            if (std::abs(sum - 1.0) > 1e-8)
                throw numerical_failure("occupancy mass drifted from 1", tr.times[i]);
        }
        for (std::size_t i = 1; i < m; ++i) {
            const double prev = tr.p_at(i - 1, k), cur = tr.p_at(i, k);
            if (cur < prev) {
                if (prev - cur > 1e-9)
                    throw numerical_failure("p_k lost monotonicity", tr.times[i]);
                tr.p[i * (static_cast<std::size_t>(k) + 1) + static_cast<std::size_t>(k)] = prev;
            }
        }
    }
    tr.dense = std::move(sol);
    return tr;
}

double bd_expected_absorption(int k, int start, double lam, double mu) {
    if (k < 1) throw invalid_k("k must be >= 1");
    if (start < 0 || start >= k) throw spec_error("start state must lie in [0, k)");
    // T_j = expected passage time j -> j+1; absorption from m is sum_{j>=m} T_j
    std::vector<double> T(static_cast<std::size_t>(k));
    T[0] = 1.0 / (k * lam);
    for (int j = 1; j < k; ++j) {
        const double b = (k - j) * lam, d = j * mu;
        T[static_cast<std::size_t>(j)] = (1.0 + d * T[static_cast<std::size_t>(j) - 1]) / b;
    }
    double e = 0.0;
    for (int j = start; j < k; ++j) e += T[static_cast<std::size_t>(j)];
    return e;
}

HittingResult expected_hitting_time(const RatePair& rates, int k, const SolverOptions& opt,
                                    double eps_tail, ChainMode mode, double horizon_cap) {
    check_mode(k, mode);
    if (!(eps_tail > 0.0)) throw spec_error("eps_tail must be positive");
    const double cap = horizon_cap > 0.0 ? horizon_cap : 1e6;

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const JointRhs rhs{rates, k, mode};
    const std::vector<double> y0 = initial_state(k);
    const std::size_t ip = static_cast<std::size_t>(k) + 1; // p_k index in the state
    const std::size_t ic = static_cast<std::size_t>(k) + 2; // cum index

    if (mode == ChainMode::literal_k1) {
        bool crossed = false;
        auto watch = [&](const StepInterpolant& s) {
            if (s.eval(s.t1(), 2) >= 1.0) {
                crossed = true;
                return StepVerdict::stop;
            }
            return StepVerdict::proceed;
        };
        DenseSolution sol =
            integrate_dense(rhs, std::span<const double>(y0), 0.0, cap, oo, watch);
        const auto last = sol.step(sol.step_count() - 1);
        if (!crossed)
            throw horizon_exceeded("p_1 never reached 1 below the horizon cap",
                                   sol.node(sol.step_count(), ic), 0.0);
        const double tol = 1e-9 * std::max(1.0, last.t1());
        const double tc =
            bisect([&](double t) { return last.eval(t, 2) - 1.0; }, last.t0(), last.t1(), tol);
        return {last.eval(tc, ic), 0.0};
    }

    bool stopped = false;
    auto watch = [&](const StepInterpolant& s) {
        if (1.0 - s.eval(s.t1(), ip) < eps_tail) {
            stopped = true;
            return StepVerdict::stop;
        }
        return StepVerdict::proceed;
    };
    DenseSolution sol = integrate_dense(rhs, std::span<const double>(y0), 0.0, cap, oo, watch);
    const std::size_t end = sol.step_count();
    const double cum = sol.node(end, ic);
    const double survival = std::max(0.0, 1.0 - sol.node(end, ip));

    const double lam_min = scan_extreme(rates.lambda, true);
    const double mu_max = scan_extreme(rates.mu, false);
    const double tail = survival * bd_expected_absorption(k, k - 1, lam_min, mu_max);
    if (!stopped)
        throw horizon_exceeded("survival above eps_tail at the horizon cap", cum + tail, tail);
    return {cum + tail, tail};
}

HittingResult expected_hitting_time_auto(const RatePair& rates, int k, const SolverOptions& opt,
                                         double eps_tail, ChainMode mode, double cap0) {
    double cap = cap0 > 0.0 ? cap0 : 1e6;
    while (true) {
        try {
            return expected_hitting_time(rates, k, opt, eps_tail, mode, cap);
        } catch (const horizon_exceeded&) {
            if (cap >= 1e6) throw;
            cap = std::min(cap * 10.0, 1e6);
        }
    }
}

double hitting_time_fixed_horizon(const RatePair& rates, int k, double T,
                                  const SolverOptions& opt, ChainMode mode) {
    check_mode(k, mode);
    if (!(T > 0.0)) throw spec_error("horizon must be positive");
    if (mode == ChainMode::literal_k1)
        return expected_hitting_time(rates, k, opt, 1e-8, mode, T).value;

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const JointRhs rhs{rates, k, mode};
    const std::vector<double> y0 = initial_state(k);
    DenseSolution sol = integrate_dense(rhs, std::span<const double>(y0), 0.0, T, oo);
    return sol.node(sol.step_count(), static_cast<std::size_t>(k) + 2);
}

RateCurve activation_rate(const RatePair& rates, int k, std::span<const double> t_grid,
                          const SolverOptions& opt, ChainMode mode) {
    check_mode(k, mode);
    if (t_grid.empty()) throw spec_error("empty evaluation grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
            throw spec_error("grid must be non-negative and strictly increasing");
    }

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const JointRhs rhs{rates, k, mode};
    const std::vector<double> y0 = initial_state(k);
    const double horizon = std::max(t_grid.back(), 1e-12);
    double reached = horizon;
    if (mode == ChainMode::literal_k1) {
        // stop at the p_1 = 1 crossing; past it survival is negative
        auto watch = [&](const StepInterpolant& s) {
            if (s.eval(s.t1(), 2) >= 1.0) {
                reached = s.t1();
                return StepVerdict::stop;
            }
            return StepVerdict::proceed;
        };
        DenseSolution sol =
            integrate_dense(rhs, std::span<const double>(y0), 0.0, horizon, oo, watch);
        RateCurve out;
        for (double t : t_grid) {
            if (t > sol.t_end()) {
                out.truncated = true;
                break;
            }
            const double s = 1.0 - sol.eval(t, 2);
            if (s <= 1e-12) {
                out.truncated = true;
                break;
            }
            const double a = std::clamp(sol.eval(t, 0), 0.0, 1.0);
            const double num = std::max(sol.eval(t, 1), 0.0);
            out.times.push_back(t);
            out.values.push_back(rates.lambda.eval_raw(a) * num / s);
        }
        if (out.times.empty()) throw degenerate_survival();
        return out;
    }

    DenseSolution sol = integrate_dense(rhs, std::span<const double>(y0), 0.0, horizon, oo);
    RateCurve out;
    for (double t : t_grid) {
        const double s = 1.0 - sol.eval(t, static_cast<std::size_t>(k) + 1);
        if (s <= 1e-12) {
            out.truncated = true;
            break;
        }
        const double a = std::clamp(sol.eval(t, 0), 0.0, 1.0);
        const double num = std::max(sol.eval(t, static_cast<std::size_t>(k)), 0.0);
        out.times.push_back(t);
        out.values.push_back(rates.lambda.eval_raw(a) * num / s);
    }
    if (out.times.empty()) throw degenerate_survival();
    return out;
}

HittingSummary optimal_k(const RatePair& rates, double gamma, int k_max, ChainMode mode,
                         const SolverOptions& opt, double eps_tail) {
    if (k_max < 1) throw invalid_k("k_max must be >= 1");
    const TriggerResult trig = trigger_time(rates, gamma, opt);
    if (!trig.reached) throw unreachable_gamma(trig.fixed_point, gamma);

    HittingSummary s;
    s.gamma = gamma;
    s.tau_hat = trig.tau_hat;
    s.mode_k1 = mode;
    const double cap = 100.0 * std::max(1.0, trig.tau_hat);
    for (int k = 1; k <= k_max; ++k) {
        const ChainMode mk = (k == 1) ? mode : ChainMode::absorbing;
        const HittingResult r = expected_hitting_time_auto(rates, k, opt, eps_tail, mk, cap);
        s.records.push_back({k, r.value, r.tail_bound});
    }
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        if (!(s.records[i].value > s.records[i - 1].value))
            throw numerical_failure("hitting times not increasing in k",
                                    static_cast<double>(s.records[i].k));
    }

    int below = 0, above = 0; // max k with E <= tau, min k with E >= tau
    for (const auto& r : s.records) {
        if (r.value <= s.tau_hat) below = r.k;
        if (above == 0 && r.value >= s.tau_hat) above = r.k;
    }
    s.k_c_minus = below == 0 ? 1 : below;
    s.k_c_plus = above == 0 ? k_max : above;
    const double dm = std::abs(s.tau_hat - s.records[static_cast<std::size_t>(s.k_c_minus) - 1].value);
    const double dp = std::abs(s.tau_hat - s.records[static_cast<std::size_t>(s.k_c_plus) - 1].value);
    s.k_c = (dm <= dp) ? s.k_c_minus : s.k_c_plus;
    return s;
}

} // namespace signet
