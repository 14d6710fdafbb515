#include "signet/rates.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace signet {

namespace {

void require_pos(double c, const char* what) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw spec_error(std::string(what) + " must be a positive finite number");
}

} // namespace

RateSpec RateSpec::constant(double c) {
    require_pos(c, "constant: c");
    return RateSpec(RateFamily::constant, c, 0.0);
}

RateSpec RateSpec::exp_scale(double c, double r) {
    require_pos(c, "expscale: c");
    if (!std::isfinite(r)) throw spec_error("expscale: r must be finite");
    return RateSpec(RateFamily::exp_scale, c, r);
}

RateSpec RateSpec::power_shift(double c, double p) {
    require_pos(c, "powershift: c");
    if (!std::isfinite(p)) throw spec_error("powershift: p must be finite");
    return RateSpec(RateFamily::power_shift, c, p);
}

RateSpec RateSpec::log_shift(double c, double b) {
    require_pos(c, "logshift: c");
    if (!(b > 1.0)) throw spec_error("logshift: need b > 1 so log(b+a) > 0 on [0,1]");
    return RateSpec(RateFamily::log_shift, c, b);
}

RateSpec RateSpec::log_shift_inverse(double c, double b) {
    require_pos(c, "logshiftinv: c");
    if (!(b > 1.0)) throw spec_error("logshiftinv: need b > 1 so log(b+a) > 0 on [0,1]");
    return RateSpec(RateFamily::log_shift_inverse, c, b);
}

double RateSpec::eval_raw(double a) const {
    switch (family_) {
    case RateFamily::constant: return p1_;
    case RateFamily::exp_scale: return p1_ * std::exp(p2_ * a);
    case RateFamily::power_shift: return p1_ * std::pow(a + 1.0, p2_);
    case RateFamily::log_shift: return p1_ * std::log(p2_ + a);
    case RateFamily::log_shift_inverse: return p1_ / std::log(p2_ + a);
    }
    return 0.0; // unreachable
}

double RateSpec::operator()(double a) const {
    if (!(a >= 0.0 && a <= 1.0)) throw domain_error("rate argument outside [0,1]");
    return eval_raw(a);
}

std::string RateSpec::describe() const {
    const char* name = nullptr;
    bool two = true;
    switch (family_) {
    case RateFamily::constant: name = "constant"; two = false; break;
    case RateFamily::exp_scale: name = "expscale"; break;
    case RateFamily::power_shift: name = "powershift"; break;
    case RateFamily::log_shift: name = "logshift"; break;
    case RateFamily::log_shift_inverse: name = "logshiftinv"; break;
    }
    char buf[96];
    if (two)
        std::snprintf(buf, sizeof buf, "%s(%.17g, %.17g)", name, p1_, p2_);
    else
        std::snprintf(buf, sizeof buf, "%s(%.17g)", name, p1_);
    return buf;
}

bool RatePair::stable_advisory(int grid) const {
    for (int i = 1; i <= grid; ++i) {
        const double a = static_cast<double>(i) / grid;
        if (!(lambda.eval_raw(a) < mu.eval_raw(a))) return false;
    }
    return true;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"const",       "exp-const", "const-exp",
                                                   "power-const", "log-log",   "aging"};
    return names;
}

RatePair preset(const std::string& name) {
    if (name == "const") return {RateSpec::constant(0.45), RateSpec::constant(0.65)};
    if (name == "exp-const") return {RateSpec::exp_scale(1.0, -1.0), RateSpec::constant(1.0)};
    if (name == "const-exp") return {RateSpec::constant(1.0), RateSpec::exp_scale(1.0, 1.0)};
    if (name == "power-const") return {RateSpec::power_shift(1.0, -1.0), RateSpec::constant(1.0)};
    if (name == "log-log")
        return {RateSpec::log_shift_inverse(1.0, 3.0), RateSpec::log_shift(1.0, 3.0)};
    if (name == "aging")
        return {RateSpec::exp_scale(0.00113, 10.27), RateSpec::exp_scale(0.00113 / 1.5, -6.5)};
    throw unknown_preset(name);
}

RateSpec parse_rate_spec(const std::string& text) {
    // family(p1) or family(p1, p2), whitespace tolerated
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    std::size_t name_begin = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-'))
        ++i;
    std::string fam = text.substr(name_begin, i - name_begin);
    skip_ws();
    if (i >= text.size() || text[i] != '(')
        throw spec_error("rate spec must look like family(params): " + text);
    ++i;
    std::vector<double> params;
    while (true) {
        skip_ws();
        std::size_t num_begin = i;
        while (i < text.size() && text[i] != ',' && text[i] != ')') ++i;
        if (i >= text.size()) throw spec_error("unterminated rate spec: " + text);
        std::string tok = text.substr(num_begin, i - num_begin);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw spec_error("bad number '" + tok + "' in rate spec: " + text);
        params.push_back(v);
        if (text[i] == ')') {
            ++i;
            break;
        }
        ++i; // comma
    }
    skip_ws();
    if (i != text.size()) throw spec_error("trailing characters in rate spec: " + text);

    auto want = [&](std::size_t n) {
        if (params.size() != n)
            throw spec_error(fam + " takes " + std::to_string(n) + " parameter(s): " + text);
    };
    if (fam == "constant") {
        want(1);
        return RateSpec::constant(params[0]);
    }
    if (fam == "expscale") {
        want(2);
        return RateSpec::exp_scale(params[0], params[1]);
    }
    if (fam == "powershift") {
        want(2);
        return RateSpec::power_shift(params[0], params[1]);
    }
    if (fam == "logshift") {
        want(2);
        return RateSpec::log_shift(params[0], params[1]);
    }
    if (fam == "logshiftinv" || fam == "logshiftinverse") {
        want(2);
        return RateSpec::log_shift_inverse(params[0], params[1]);
    }
    throw spec_error("unknown rate family '" + fam + "'");
}

} // namespace signet
