#include "signet/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "signet/csv.hpp"

namespace signet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& origin, int line, const std::string& msg) {
    throw config_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double num(const std::string& origin, int line, const std::string& v) {
    try {
        return parse_double(v);
    } catch (const io_error&) {
        bad(origin, line, "expected a number, got '" + v + "'");
    }
}

long long integer(const std::string& origin, int line, const std::string& v) {
    const std::string t = trim(v);
    long long out = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size())
        bad(origin, line, "expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t uinteger(const std::string& origin, int line, const std::string& v) {
    const std::string t = trim(v);
    std::uint64_t out = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size())
        bad(origin, line, "expected a non-negative integer, got '" + v + "'");
    return out;
}

} // namespace

ChainMode parse_mode(const std::string& text) {
    if (text == "absorbing") return ChainMode::absorbing;
    if (text == "literal-k1") return ChainMode::literal_k1;
    throw config_error("mode must be 'absorbing' or 'literal-k1', got '" + text + "'");
}

const char* mode_name(ChainMode mode) {
    return mode == ChainMode::absorbing ? "absorbing" : "literal-k1";
}

RatePair RunConfig::rates() const {
    const bool explicit_pair = lambda_spec.has_value() || mu_spec.has_value();
    if (preset_name && explicit_pair)
        throw config_error("give either a preset or explicit lambda/mu, not both");
    if (preset_name) {
        try {
            return preset(*preset_name);
        } catch (const unknown_preset& e) {
            throw config_error(e.what());
        }
    }
    if (lambda_spec && mu_spec) return {*lambda_spec, *mu_spec};
    throw config_error("no rates given: set preset or both lambda and mu");
}

RunConfig parse_config_stream(std::istream& in, const std::string& origin) {
    RunConfig rc;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') bad(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "rates" && section != "solver" && section != "network" &&
                section != "output")
                bad(origin, lineno, "unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) bad(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) bad(origin, lineno, "key outside any section");

        if (section == "rates") {
            if (key == "preset") {
                rc.preset_name = val;
            } else if (key == "lambda" || key == "mu") {
                try {
                    const RateSpec spec = parse_rate_spec(val);
                    (key == "lambda" ? rc.lambda_spec : rc.mu_spec) = spec;
                } catch (const spec_error& e) {
                    bad(origin, lineno, e.what());
                }
            } else {
                bad(origin, lineno, "unknown key '" + key + "' in [rates]");
            }
        } else if (section == "solver") {
            if (key == "rtol") {
                rc.rtol = num(origin, lineno, val);
                if (!(rc.rtol > 0)) bad(origin, lineno, "rtol must be positive");
            } else if (key == "atol") {
                rc.atol = num(origin, lineno, val);
                if (!(rc.atol > 0)) bad(origin, lineno, "atol must be positive");
            } else if (key == "gamma") {
                rc.gamma = num(origin, lineno, val);
                if (!(rc.gamma > 0 && rc.gamma < 1))
                    bad(origin, lineno, "gamma must lie in (0,1)");
            } else if (key == "k") {
                rc.k = static_cast<int>(integer(origin, lineno, val));
                if (rc.k < 1) bad(origin, lineno, "k must be >= 1");
            } else if (key == "k_max") {
                rc.k_max = static_cast<int>(integer(origin, lineno, val));
                if (rc.k_max < 1) bad(origin, lineno, "k_max must be >= 1");
            } else if (key == "mode") {
                try {
                    rc.mode = parse_mode(val);
                } catch (const config_error& e) {
                    bad(origin, lineno, e.what());
                }
            } else if (key == "eps_tail") {
                rc.eps_tail = num(origin, lineno, val);
                if (!(rc.eps_tail > 0)) bad(origin, lineno, "eps_tail must be positive");
            } else if (key == "horizon") {
                rc.horizon = num(origin, lineno, val);
                if (!(rc.horizon > 0)) bad(origin, lineno, "horizon must be positive");
            } else if (key == "rate_points") {
                rc.rate_points = static_cast<int>(integer(origin, lineno, val));
                if (rc.rate_points < 2) bad(origin, lineno, "rate_points must be >= 2");
            } else if (key == "rate_t_max") {
                rc.rate_t_max = num(origin, lineno, val);
                if (!(rc.rate_t_max > 0)) bad(origin, lineno, "rate_t_max must be positive");
            } else {
                bad(origin, lineno, "unknown key '" + key + "' in [solver]");
            }
        } else if (section == "network") {
            if (key == "n") {
                rc.n = uinteger(origin, lineno, val);
            } else if (key == "m") {
                rc.m = uinteger(origin, lineno, val);
            } else if (key == "replicates") {
                rc.replicates = uinteger(origin, lineno, val);
                if (rc.replicates < 1) bad(origin, lineno, "replicates must be >= 1");
            } else if (key == "seed") {
                rc.seed = uinteger(origin, lineno, val);
            } else if (key == "assortativity_target") {
                const double v = num(origin, lineno, val);
                if (!(v >= -1.0 && v <= 0.0))
                    bad(origin, lineno, "assortativity_target must lie in [-1, 0]");
                rc.assort_target = v;
            } else if (key == "threads") {
                rc.threads = static_cast<unsigned>(uinteger(origin, lineno, val));
                if (rc.threads < 1) bad(origin, lineno, "threads must be >= 1");
            } else if (key == "curve_points") {
                rc.curve_points = uinteger(origin, lineno, val);
                if (rc.curve_points < 2) bad(origin, lineno, "curve_points must be >= 2");
            } else if (key == "curve_max") {
                rc.curve_max = num(origin, lineno, val);
                if (!(rc.curve_max > 0)) bad(origin, lineno, "curve_max must be positive");
            } else if (key == "max_swaps") {
                rc.max_swaps = uinteger(origin, lineno, val);
            } else {
                bad(origin, lineno, "unknown key '" + key + "' in [network]");
            }
        } else { // output
            if (key == "dir") {
                rc.out_dir = val;
            } else {
                bad(origin, lineno, "unknown key '" + key + "' in [output]");
            }
        }
    }
    return rc;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    return parse_config_stream(in, path);
}

} // namespace signet
