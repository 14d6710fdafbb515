#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>

#include "signet/sim.hpp"

using namespace signet;

namespace {

NetworkGraph complete(std::uint32_t n) {
    NetworkGraph g;
    g.adj.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
            if (i != j) g.adj[i].push_back(j);
    return g;
}

bool same_bits(double a, double b) {
    std::uint64_t ua, ub;
    std::memcpy(&ua, &a, 8);
    std::memcpy(&ub, &b, 8);
    return ua == ub;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_bits(a[i], b[i])) return false;
    return true;
}

} // namespace

TEST_CASE("second activation on K4 with negligible return rate") {
    // lambda = 1 constant: passive nodes flip at unit rate independent of the
    // neighbourhood, so the time until 2 of 4 are active is Exp(4) + Exp(3)
    SimConfig cfg;
    cfg.rates = RatePair{RateSpec::constant(1.0), RateSpec::constant(1e-12)};
    cfg.gamma = 0.4; // ceil(0.4 * 4) = 2 active nodes
    cfg.k = 1;
    cfg.replicates = 4000;
    cfg.master_seed = 11;
    cfg.horizon = 50.0;
    cfg.threads = 4;
    const SimEstimate est = simulate(complete(4), cfg);

    REQUIRE(est.trigger.used == 4000);
    const double want = 1.0 / 4.0 + 1.0 / 3.0;
    CHECK(std::fabs(est.trigger.mean - want) < 3.0 * est.trigger.std_err);
    // k = 1: the key node's own activation is Exp(1)
    REQUIRE(est.hit.used == 4000);
    CHECK(std::fabs(est.hit.mean - 1.0) < 3.0 * est.hit.std_err);
}

TEST_CASE("estimates are bit-identical across thread counts") {
    SimConfig cfg;
    cfg.rates = preset("const");
    cfg.gamma = 0.3;
    cfg.k = 2;
    cfg.replicates = 300;
    cfg.master_seed = 21;
    cfg.horizon = 30.0;
    cfg.curve_grid = {1.0, 5.0, 10.0, 20.0};

    cfg.threads = 1;
    const SimEstimate one = simulate(complete(12), cfg);
    cfg.threads = 8;
    const SimEstimate eight = simulate(complete(12), cfg);

    CHECK(same_bits(one.trigger_samples, eight.trigger_samples));
    CHECK(same_bits(one.hit_samples, eight.hit_samples));
    CHECK(same_bits(one.curve_values, eight.curve_values));
    CHECK(one.trigger.mean == eight.trigger.mean);
    REQUIRE(one.key_first_times.size() == eight.key_first_times.size());
    for (std::size_t r = 0; r < one.key_first_times.size(); ++r)
        CHECK(same_bits(one.key_first_times[r], eight.key_first_times[r]));
}

TEST_CASE("a tiny horizon censors every replicate") {
    SimConfig cfg;
    cfg.rates = preset("const");
    cfg.k = 1;
    cfg.replicates = 50;
    cfg.master_seed = 3;
    cfg.horizon = 1e-4;
    const SimEstimate est = simulate(complete(6), cfg);
    CHECK(est.trigger.used == 0);
    CHECK(est.trigger.censored == 50);
    CHECK(est.hit.used == 0);
    for (double v : est.hit_samples) CHECK(std::isnan(v));
}

TEST_CASE("key-first times are nested and end at the hit sample") {
    SimConfig cfg;
    cfg.rates = preset("const");
    cfg.k = 3;
    cfg.replicates = 200;
    cfg.master_seed = 17;
    cfg.horizon = 200.0;
    const SimEstimate est = simulate(complete(8), cfg);
    REQUIRE(est.key_first_times.size() == 200);
    for (std::size_t r = 0; r < 200; ++r) {
        const auto& kf = est.key_first_times[r];
        REQUIRE(kf.size() == 3);
        for (std::size_t j = 1; j < kf.size(); ++j)
            if (!std::isnan(kf[j - 1]) && !std::isnan(kf[j])) REQUIRE(kf[j - 1] <= kf[j]);
        if (!std::isnan(est.hit_samples[r])) REQUIRE(kf[2] == est.hit_samples[r]);
    }
}

TEST_CASE("curve stays in [0,1] on the requested grid") {
    SimConfig cfg;
    cfg.rates = preset("const");
    cfg.k = 1;
    cfg.replicates = 100;
    cfg.master_seed = 5;
    cfg.horizon = 10.0;
    cfg.curve_grid = {0.0, 2.5, 5.0, 7.5, 10.0};
    const SimEstimate est = simulate(complete(10), cfg);
    REQUIRE(est.curve_times == cfg.curve_grid);
    REQUIRE(est.curve_values.size() == 5);
    CHECK(est.curve_values[0] == doctest::Approx(0.0)); // everyone starts passive
    for (double v : est.curve_values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.rates = preset("const");
    cfg.replicates = 1;
    cfg.horizon = 0.0; // missing
    CHECK_THROWS_AS((void)simulate(complete(4), cfg), const spec_error&);
    cfg.horizon = 1.0;
    cfg.k = 99; // more keys than nodes
    CHECK_THROWS_AS((void)simulate(complete(4), cfg), const invalid_k&);
}

TEST_CASE("meanfield gap is finite on a shared range and rejects disjoint ones") {
    SimConfig cfg;
    cfg.rates = preset("const");
    cfg.k = 1;
    cfg.replicates = 150;
    cfg.master_seed = 29;
    cfg.horizon = 6.0;
    cfg.curve_grid = {1.0, 2.0, 3.0, 4.0, 5.0};
    const SimEstimate est = simulate(complete(40), cfg);

    const Trajectory traj = solve_activation(cfg.rates, 6.0);
    const double gap = meanfield_gap(est, traj);
    CHECK(std::isfinite(gap));
    CHECK(gap >= 0.0);
    CHECK(gap < 0.25); // complete graph tracks the mean field loosely even at n = 40

    const Trajectory tiny = solve_activation(cfg.rates, 0.5);
    CHECK_THROWS_AS((void)meanfield_gap(est, tiny), const empty_overlap&);
}
