#pragma once

#include <span>
#include <vector>

#include "signet/meanfield.hpp"
#include "signet/rates.hpp"

namespace signet {

// absorbing: S_k absorbing, mass conserved (the default, matches the
//   first-passage construction for every k).
// literal_k1: k=1 system with the mu return term kept while p_1 still only
//   gains mass; total mass grows, p_1 crosses 1 in finite time. Used to
//   reproduce the published k=1 row; invalid for k != 1.
enum class ChainMode { absorbing, literal_k1 };

// (k+1)x(k+1) transition-rate matrix, row-major, q[i][j] = rate i->j and the
// diagonal carries the negated outflow. dp_j/dt = sum_i p_i q_{i,j}.
std::vector<double> build_generator(int k, double lam, double mu, ChainMode mode);

struct OccupancyTrajectory {
    int k = 0;
    ChainMode mode = ChainMode::absorbing;
    std::vector<double> times;
    std::vector<double> p; // times.size() x (k+1), row-major
    std::vector<double> cum_survival;
    std::vector<double> a_hat;
    DenseSolution dense; // joint state [a_hat, p_0..p_k, cum_survival]
    double rtol = 0, atol = 0;

    double p_at(std::size_t i, int j) const {
        return p[i * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(j)];
    }
};

// Integrates the coupled system {a_hat, p_0..p_k, cum_survival} on [0, horizon].
OccupancyTrajectory solve_occupancy(const RatePair& rates, int k, double horizon,
                                    const SolverOptions& opt = {},
                                    ChainMode mode = ChainMode::absorbing);

struct HittingResult {
    double value = 0;      // E[tau_k] estimate
    double tail_bound = 0; // truncation estimate added to the survival integral
};

// Absorbing: integrate (1 - p_k) until survival < eps_tail, then add the
// worst-case constant-rate tail estimate. Literal-k1: integrate up to the
// first p_1 = 1 crossing. horizon_cap <= 0 selects the 1e6 default.
HittingResult expected_hitting_time(const RatePair& rates, int k, const SolverOptions& opt = {},
                                    double eps_tail = 1e-8,
                                    ChainMode mode = ChainMode::absorbing,
                                    double horizon_cap = 0.0);

// Same computation, but for automatic caps: when the cap binds before the
// survival integral converges, the cap is grown tenfold (up to the 1e6
// ceiling) instead of failing. Slow-mixing chains (e.g. constant rates at
// k >= 6) need far more than 100*tau_hat to push survival below eps_tail.
HittingResult expected_hitting_time_auto(const RatePair& rates, int k,
                                         const SolverOptions& opt = {}, double eps_tail = 1e-8,
                                         ChainMode mode = ChainMode::absorbing,
                                         double cap0 = 0.0);

// Plain truncated quadrature of (1 - p_k) over [0, T], no tail term, no early
// stop (literal-k1 still stops at its p_1 = 1 crossing). This is the protocol
// behind the reference tables, which were produced with a fixed horizon.
double hitting_time_fixed_horizon(const RatePair& rates, int k, double T,
                                  const SolverOptions& opt = {},
                                  ChainMode mode = ChainMode::absorbing);

// Expected absorption time at k of the constant-rate chain (up (k-i)lam,
// down i*mu) started from state `start`.
double bd_expected_absorption(int k, int start, double lam, double mu);

struct RateCurve {
    std::vector<double> times;
    std::vector<double> values;
    bool truncated = false; // grid cut where 1 - p_k underflowed
};

// m_k(t) = lambda(a_hat(t)) * p_{k-1}(t) / (1 - p_k(t)) on the given grid.
RateCurve activation_rate(const RatePair& rates, int k, std::span<const double> t_grid,
                          const SolverOptions& opt = {},
                          ChainMode mode = ChainMode::absorbing);

struct HittingRecord {
    int k = 0;
    double value = 0;
    double tail_bound = 0;
};

struct HittingSummary {
    double gamma = 0;
    double tau_hat = 0;
    std::vector<HittingRecord> records; // k = 1..k_max
    int k_c_minus = 0, k_c_plus = 0, k_c = 0;
    ChainMode mode_k1 = ChainMode::absorbing; // mode used for the k=1 entry
};

// E[tau_k] for k = 1..k_max (k=1 in the requested mode, k >= 2 absorbing),
// and the k whose hitting time is closest to the trigger time; ties resolved
// downward. Throws unreachable_gamma when the threshold is above the
// smallest fixed point.
HittingSummary optimal_k(const RatePair& rates, double gamma, int k_max = 8,
                         ChainMode mode = ChainMode::absorbing, const SolverOptions& opt = {},
                         double eps_tail = 1e-8);

} // namespace signet
