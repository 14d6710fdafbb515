#include "signet/sim.hpp"

#include <atomic>
#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

#include "signet/rng.hpp"

namespace signet {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

// binary-indexed sum tree over per-node rates: O(log n) update and sample
class RateTree {
public:
    explicit RateTree(std::size_t n) : base_(std::bit_ceil(std::max<std::size_t>(n, 1))) {
        tree_.assign(2 * base_, 0.0);
    }
    void set(std::size_t i, double r) {
        i += base_;
        tree_[i] = r;
        for (i >>= 1; i >= 1; i >>= 1) {
            tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
            if (i == 1) break;
        }
    }
    double get(std::size_t i) const { return tree_[base_ + i]; }
    double total() const { return tree_[1]; }
    std::size_t sample(double x, std::size_t n) const {
        std::size_t i = 1;
        while (i < base_) {
            i <<= 1;
            if (x >= tree_[i]) {
                x -= tree_[i];
                i |= 1;
            }
        }
        // float round-off can fall past the last live leaf
        return std::min(i - base_, n - 1);
    }

private:
    std::size_t base_;
    std::vector<double> tree_;
};

struct RepResult {
    double tau_gamma = qnan;
    std::vector<double> key_first; // size k
    std::vector<double> curve;     // values at the grid points covered by horizon
};

std::size_t trigger_count(double gamma, std::size_t n) {
    // smallest c with c/n >= gamma under double comparison
    std::size_t c = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n)));
    while (c > 0 && static_cast<double>(c - 1) / static_cast<double>(n) >= gamma) --c;
    while (static_cast<double>(c) / static_cast<double>(n) < gamma) ++c;
    return c;
}

RepResult run_replicate(const NetworkGraph& g, const SimConfig& cfg,
                        const std::vector<char>& is_key, std::size_t rep) {
    const std::size_t n = g.n();
    auto rng = make_stream(cfg.master_seed, rep);

    std::vector<char> active(n, 0);
    std::vector<std::uint32_t> act_nbr(n, 0);
    RateTree tree(n);

    auto node_rate = [&](std::size_t i) {
        const double a = static_cast<double>(act_nbr[i]) / static_cast<double>(g.deg(i));
        return active[i] ? cfg.rates.mu.eval_raw(a) : cfg.rates.lambda.eval_raw(a);
    };
    for (std::size_t i = 0; i < n; ++i) tree.set(i, node_rate(i));

    const std::size_t need = trigger_count(cfg.gamma, n);
    std::size_t active_count = 0, keys_active = 0;

    RepResult res;
    res.key_first.assign(cfg.k, qnan);
    std::size_t covered = 0;
    while (covered < cfg.curve_grid.size() && cfg.curve_grid[covered] <= cfg.horizon) ++covered;
    res.curve.assign(covered, qnan);

    double t = 0.0;
    std::size_t gi = 0;
    bool gamma_done = false, hit_done = false;
    std::size_t events = 0;

    auto record_before = [&](double t_next) {
        while (gi < covered && cfg.curve_grid[gi] < t_next) {
            res.curve[gi] = static_cast<double>(active_count) / static_cast<double>(n);
            ++gi;
        }
    };

    while (!(gamma_done && hit_done && gi >= covered)) {
        const double total = tree.total();
        const double t_next = t + exponential(rng, total);
        if (t_next > cfg.horizon) {
            // state is frozen on [t, horizon]; fill what the grid still needs
            while (gi < covered) {
                res.curve[gi] = static_cast<double>(active_count) / static_cast<double>(n);
                ++gi;
            }
            break;
        }
        record_before(t_next);
        t = t_next;

        const std::size_t i = tree.sample(uniform01(rng) * total, n);
        active[i] ^= 1;
        if (active[i]) {
            ++active_count;
            if (is_key[i]) {
                ++keys_active;
                if (std::isnan(res.key_first[keys_active - 1]))
                    res.key_first[keys_active - 1] = t;
                if (keys_active == cfg.k) hit_done = true;
            }
        } else {
            --active_count;
            if (is_key[i]) --keys_active;
        }
        tree.set(i, node_rate(i));
        for (std::uint32_t j : g.adj[i]) {
            if (active[i])
                ++act_nbr[j];
            else
                --act_nbr[j];
            tree.set(j, node_rate(j));
        }
        if (!gamma_done && active_count >= need) {
            res.tau_gamma = t;
            gamma_done = true;
        }
        ++events;
#ifndef NDEBUG
        if (events % 1000 == 0) {
            for (std::size_t q = 0; q < n; ++q) {
                const double fresh = node_rate(q);
                assert(std::abs(tree.get(q) - fresh) <= 1e-12 * std::max(1.0, fresh));
            }
        }
#endif
    }
    return res;
}

TargetStats stats_of(const std::vector<double>& samples) {
    TargetStats s;
    double sum = 0;
    for (double v : samples) {
        if (std::isnan(v)) {
            ++s.censored;
        } else {
            ++s.used;
            sum += v;
        }
    }
    if (s.used == 0) {
        s.mean = s.stddev = s.std_err = qnan;
        return s;
    }
    s.mean = sum / static_cast<double>(s.used);
    double ss = 0;
    for (double v : samples)
        if (!std::isnan(v)) ss += (v - s.mean) * (v - s.mean);
    s.stddev = s.used > 1 ? std::sqrt(ss / static_cast<double>(s.used - 1)) : 0.0;
    s.std_err = s.stddev / std::sqrt(static_cast<double>(s.used));
    return s;
}

} // namespace

SimEstimate simulate(const NetworkGraph& g, const SimConfig& cfg) {
    const std::size_t n = g.n();
    if (n == 0) throw spec_error("empty graph");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw spec_error("gamma must lie in (0,1)");
    if (cfg.k < 1 || cfg.k > n) throw invalid_k("k must lie in [1, n]");
    if (cfg.replicates < 1) throw spec_error("need at least one replicate");
    if (!(cfg.horizon > 0.0)) throw spec_error("horizon must be positive");
    for (std::size_t i = 1; i < cfg.curve_grid.size(); ++i)
        if (!(cfg.curve_grid[i] > cfg.curve_grid[i - 1]))
            throw spec_error("curve grid must be strictly increasing");
    if (!cfg.curve_grid.empty() && cfg.curve_grid.front() < 0.0)
        throw spec_error("curve grid must be non-negative");

    const std::vector<std::uint32_t> keys = select_key_nodes(g, cfg.k);
    std::vector<char> is_key(n, 0);
    for (std::uint32_t id : keys) is_key[id] = 1;

    std::vector<RepResult> results(cfg.replicates);
    const unsigned workers =
        std::min<unsigned>(std::max(1u, cfg.threads),
                           static_cast<unsigned>(std::min<std::size_t>(cfg.replicates, 256)));
    if (workers == 1) {
        for (std::size_t r = 0; r < cfg.replicates; ++r)
            results[r] = run_replicate(g, cfg, is_key, r);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            while (true) {
                const std::size_t r = next.fetch_add(1);
                if (r >= cfg.replicates) return;
                results[r] = run_replicate(g, cfg, is_key, r);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // fixed-order fold: identical output regardless of scheduling
    SimEstimate est;
    est.trigger_samples.reserve(cfg.replicates);
    est.hit_samples.reserve(cfg.replicates);
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        est.trigger_samples.push_back(results[r].tau_gamma);
        est.hit_samples.push_back(results[r].key_first[cfg.k - 1]);
        est.key_first_times.push_back(results[r].key_first);
    }
    est.trigger = stats_of(est.trigger_samples);
    est.hit = stats_of(est.hit_samples);

    const std::size_t covered = results.empty() ? 0 : results[0].curve.size();
    est.curve_times.assign(cfg.curve_grid.begin(),
                           cfg.curve_grid.begin() + static_cast<std::ptrdiff_t>(covered));
    est.curve_values.assign(covered, 0.0);
    for (std::size_t r = 0; r < cfg.replicates; ++r)
        for (std::size_t i = 0; i < covered; ++i) est.curve_values[i] += results[r].curve[i];
    for (double& v : est.curve_values) v /= static_cast<double>(cfg.replicates);

    try {
        est.achieved_assortativity = assortativity(g);
    } catch (const degenerate_variance&) {
        est.achieved_assortativity = qnan;
    }
    return est;
}

double meanfield_gap(const SimEstimate& est, const Trajectory& traj) {
    double gap = -1.0;
    for (std::size_t i = 0; i < est.curve_times.size(); ++i) {
        const double t = est.curve_times[i];
        if (t < 0.0 || t > traj.horizon) continue;
        gap = std::max(gap, std::abs(est.curve_values[i] - traj.eval(t)));
    }
    if (gap < 0.0) throw empty_overlap();
    return gap;
}

} // namespace signet
