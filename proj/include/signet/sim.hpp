#pragma once

#include <cstdint>
#include <vector>

#include "signet/graph.hpp"
#include "signet/meanfield.hpp"
#include "signet/rates.hpp"

namespace signet {

struct SimConfig {
    // graph generation block (used by the front end; simulate() takes the
    // graph it was built from)
    std::size_t n = 0;
    std::size_t m = 0;
    double assortativity_target = 1.0; // > 0 means "no rewiring requested"

    RatePair rates{RateSpec::constant(1.0), RateSpec::constant(1.0)};
    double gamma = 0.4;
    std::size_t k = 1;
    std::size_t replicates = 1;
    std::uint64_t master_seed = 1;
    double horizon = 0; // required; censoring boundary
    std::vector<double> curve_grid; // ascending times for the mean-activation curve
    unsigned threads = 1;
};

struct TargetStats {
    double mean = 0, stddev = 0, std_err = 0;
    std::size_t used = 0;     // uncensored replicates
    std::size_t censored = 0; // replicates that hit the horizon first
};

struct SimEstimate {
    TargetStats trigger; // tau_gamma
    TargetStats hit;     // tau_k
    std::vector<double> trigger_samples; // per replicate, NaN = censored
    std::vector<double> hit_samples;
    // per replicate: first time >= j key nodes are simultaneously active,
    // j = 1..k (NaN where never seen); last entry is tau_k
    std::vector<std::vector<double>> key_first_times;
    double achieved_assortativity = 0; // NaN when degenerate
    std::vector<double> curve_times;
    std::vector<double> curve_values; // mean over replicates of the active fraction
};

// Exact event-driven simulation of the n-node chain. Replicate r draws its
// events from stream(master_seed, r); results are bit-identical for any
// thread count.
SimEstimate simulate(const NetworkGraph& g, const SimConfig& cfg);

// sup-norm distance between the empirical curve and the mean-field solution
// over the shared time range.
double meanfield_gap(const SimEstimate& est, const Trajectory& traj);

} // namespace signet
