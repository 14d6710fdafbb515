#pragma once

#include <stdexcept>
#include <string>

namespace signet {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters for a rate family (rejected at construction).
struct spec_error : error {
    using error::error;
};

// Evaluation argument outside [0,1].
struct domain_error : error {
    using error::error;
};

struct unknown_preset : error {
    explicit unknown_preset(const std::string& name)
        : error("unknown rate preset: " + name) {}
};

// Integrator breakdown (step underflow, non-finite state, step budget).
struct numerical_failure : error {
    numerical_failure(const std::string& what, double t)
        : error(what + " (t=" + std::to_string(t) + ")"), time(t) {}
    double time;
};

struct invalid_k : error {
    using error::error;
};

struct mode_error : error {
    using error::error;
};

// Hitting-time integration reached its horizon cap before converging.
// Carries the best partial estimate and its tail bound.
struct horizon_exceeded : error {
    horizon_exceeded(const std::string& what, double partial, double bound)
        : error(what), partial_value(partial), tail_bound(bound) {}
    double partial_value;
    double tail_bound;
};

// Threshold gamma lies at or above the smallest stable fixed point.
struct unreachable_gamma : error {
    unreachable_gamma(double fp, double g)
        : error("threshold " + std::to_string(g) +
                " is unreachable; activation fraction saturates at " +
                std::to_string(fp)),
          fixed_point(fp), gamma(g) {}
    double fixed_point;
    double gamma;
};

// 1 - p_k underflowed on the whole requested grid.
struct degenerate_survival : error {
    degenerate_survival() : error("1 - p_k underflowed on the whole requested grid") {}
};

struct invalid_params : error {
    using error::error;
};

// All edge-endpoint degrees equal; assortativity undefined.
struct degenerate_variance : error {
    degenerate_variance() : error("all edge-endpoint degrees are equal; correlation undefined") {}
};

struct empty_overlap : error {
    empty_overlap() : error("no shared time range between curve and trajectory") {}
};

struct config_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

} // namespace signet
