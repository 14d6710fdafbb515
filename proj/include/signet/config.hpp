#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "signet/keychain.hpp"
#include "signet/rates.hpp"

namespace signet {

// Flat "key = value" config with sections [rates] [solver] [network] [output],
// '#' comments; unknown sections or keys are errors.
struct RunConfig {
    // [rates]
    std::optional<std::string> preset_name;
    std::optional<RateSpec> lambda_spec;
    std::optional<RateSpec> mu_spec;

    // [solver]
    double rtol = 1e-8;
    double atol = 1e-12;
    double gamma = 0.4;
    int k = 0; // 0: command default (hitting uses the whole 1..k_max range)
    int k_max = 8;
    ChainMode mode = ChainMode::absorbing;
    double eps_tail = 1e-8;
    double horizon = 0; // 0: automatic choice per command
    int rate_points = 201;
    double rate_t_max = 0; // 0: automatic

    // [network]
    std::size_t n = 10'000;
    std::size_t m = 3;
    std::size_t replicates = 100;
    std::uint64_t seed = 1;
    std::optional<double> assort_target; // in [-1, 0]; unset = no rewiring
    unsigned threads = 1;
    std::size_t curve_points = 101;
    double curve_max = 0; // 0: horizon
    std::size_t max_swaps = 1'000'000;

    // [output]
    std::string out_dir; // empty: no files written

    RatePair rates() const;          // resolve preset vs explicit specs
    SolverOptions solver() const { return {rtol, atol}; }
};

ChainMode parse_mode(const std::string& text); // "absorbing" | "literal-k1"
const char* mode_name(ChainMode mode);

RunConfig parse_config_stream(std::istream& in, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

} // namespace signet
