#pragma once

#include <string>
#include <vector>

#include "signet/errors.hpp"

namespace signet {

enum class RateFamily { constant, exp_scale, power_shift, log_shift, log_shift_inverse };

// One parametric rate function f(a) on the activation fraction a in [0,1]:
//   constant(c)         : f(a) = c
//   expscale(c, r)      : f(a) = c * exp(r*a)
//   powershift(c, p)    : f(a) = c * (a+1)^p
//   logshift(c, b)      : f(a) = c * log(b+a)
//   logshiftinv(c, b)   : f(a) = c / log(b+a)
// Positivity on [0,1] is enforced at construction (c > 0, and b > 1 for the
// log families), so eval never returns a non-positive rate.
class RateSpec {
public:
    static RateSpec constant(double c);
    static RateSpec exp_scale(double c, double r);
    static RateSpec power_shift(double c, double p);
    static RateSpec log_shift(double c, double b);
    static RateSpec log_shift_inverse(double c, double b);

    RateFamily family() const { return family_; }
    double p1() const { return p1_; }
    double p2() const { return p2_; }

    // eval with the [0,1] domain check
    double operator()(double a) const;
    // eval without the check (integrator internals clamp instead)
    double eval_raw(double a) const;

    std::string describe() const;

    bool operator==(const RateSpec&) const = default;

private:
    RateSpec(RateFamily f, double a, double b) : family_(f), p1_(a), p2_(b) {}
    RateFamily family_;
    double p1_, p2_;
};

struct RatePair {
    RateSpec lambda; // passive -> active
    RateSpec mu;     // active -> passive

    // advisory only: lambda(a) < mu(a) on a grid over (0,1]
    bool stable_advisory(int grid = 1000) const;
};

// Named pairs used by the reference tables; throws unknown_preset.
RatePair preset(const std::string& name);
const std::vector<std::string>& preset_names();

// Parse "family(p1[, p2])", e.g. "expscale(0.00113, 10.27)".
RateSpec parse_rate_spec(const std::string& text);

} // namespace signet
