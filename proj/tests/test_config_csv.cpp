#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "signet/config.hpp"
#include "signet/csv.hpp"

using namespace signet;

TEST_CASE("fmt_full round-trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 9.0 / 22.0, 745.156, -2.5e-7, 1e-300, 0.0, 65.67251921425937})
        CHECK(parse_double(fmt_full(v)) == v);
}

TEST_CASE("fmt_sig trims to significant digits") {
    CHECK(fmt_sig(3.4606022436987063) == "3.4606");
    CHECK(fmt_sig(2.0) == "2");
    CHECK(fmt_sig(0.45, 2) == "0.45");
    CHECK(fmt_sig(97.93332844469654, 4) == "97.93");
}

TEST_CASE("parse_double is strict about junk") {
    CHECK(parse_double("1.5e3") == doctest::Approx(1500.0));
    CHECK(parse_double("  42 ") == doctest::Approx(42.0)); // outer whitespace tolerated
    CHECK_THROWS_AS((void)parse_double(""), const io_error&);
    CHECK_THROWS_AS((void)parse_double("abc"), const io_error&);
    CHECK_THROWS_AS((void)parse_double("1.2.3"), const io_error&);
    CHECK_THROWS_AS((void)parse_double("4 2"), const io_error&);
}

TEST_CASE("read_csv splits rows and survives CRLF") {
    std::stringstream in("a,b\r\n1,2\n\n3,4\n");
    const auto rows = read_csv(in);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"a", "b"});
    CHECK(rows[1] == std::vector<std::string>{"1", "2"});
    CHECK(rows[2] == std::vector<std::string>{"3", "4"});
}

TEST_CASE("a full config file parses into the right fields") {
    std::stringstream in(R"(# run setup
[rates]
preset = aging

[solver]
rtol = 1e-9
gamma = 0.5          # threshold
k_max = 7
mode = literal-k1
eps_tail = 1e-9

[network]
n = 2000
m = 4
replicates = 32
seed = 99
assortativity_target = -0.3
threads = 8

[output]
dir = out/run1
)");
    const RunConfig rc = parse_config_stream(in, "test.cfg");
    CHECK(rc.preset_name == "aging");
    CHECK(rc.rtol == doctest::Approx(1e-9));
    CHECK(rc.atol == doctest::Approx(1e-12)); // untouched default
    CHECK(rc.gamma == doctest::Approx(0.5));
    CHECK(rc.k_max == 7);
    CHECK(rc.mode == ChainMode::literal_k1);
    CHECK(rc.eps_tail == doctest::Approx(1e-9));
    CHECK(rc.n == 2000);
    CHECK(rc.m == 4);
    CHECK(rc.replicates == 32);
    CHECK(rc.seed == 99);
    REQUIRE(rc.assort_target.has_value());
    CHECK(*rc.assort_target == doctest::Approx(-0.3));
    CHECK(rc.threads == 8);
    CHECK(rc.out_dir == "out/run1");

    const RatePair rp = rc.rates();
    CHECK(rp.lambda(0.0) == doctest::Approx(0.00113));
}

TEST_CASE("explicit lambda and mu are accepted as a pair") {
    std::stringstream in("[rates]\nlambda = constant(0.45)\nmu = constant(0.65)\n");
    const RunConfig rc = parse_config_stream(in, "x");
    const RatePair rp = rc.rates();
    CHECK(rp.lambda(0.2) == doctest::Approx(0.45));
    CHECK(rp.mu(0.2) == doctest::Approx(0.65));
}

TEST_CASE("config errors carry the origin and line number") {
    auto expect_mention = [](const std::string& text, const std::string& frag) {
        std::stringstream in(text);
        try {
            (void)parse_config_stream(in, "bad.cfg");
            FAIL_CHECK("expected config_error for: ", text);
        } catch (const config_error& e) {
            const std::string msg = e.what();
            CHECK_MESSAGE(msg.find("bad.cfg:") != std::string::npos, msg);
            CHECK_MESSAGE(msg.find(frag) != std::string::npos, msg);
        }
    };
    expect_mention("[rates]\nwat = 1\n", "unknown key");
    expect_mention("[nope]\n", "unknown section");
    expect_mention("preset = const\n", "outside any section");
    expect_mention("[solver]\ngamma = 1.5\n", "gamma");
    expect_mention("[solver]\nrtol = all-of-it\n", "expected a number");
    expect_mention("[solver]\nmode =平\n", "mode");
    expect_mention("[network]\nassortativity_target = 0.4\n", "assortativity_target");
    expect_mention("[solver]\nk\n", "expected key = value");
}

TEST_CASE("rate resolution conflicts are reported") {
    RunConfig both;
    both.preset_name = "const";
    both.lambda_spec = RateSpec::constant(1.0);
    both.mu_spec = RateSpec::constant(2.0);
    CHECK_THROWS_AS((void)both.rates(), const config_error&);

    RunConfig none;
    CHECK_THROWS_AS((void)none.rates(), const config_error&);

    RunConfig half; // lambda without mu
    half.lambda_spec = RateSpec::constant(1.0);
    CHECK_THROWS_AS((void)half.rates(), const config_error&);

    RunConfig badname;
    badname.preset_name = "sigmoid";
    CHECK_THROWS_AS((void)badname.rates(), const config_error&);
}

TEST_CASE("mode names round-trip") {
    CHECK(parse_mode("absorbing") == ChainMode::absorbing);
    CHECK(parse_mode("literal-k1") == ChainMode::literal_k1);
    CHECK(parse_mode(mode_name(ChainMode::literal_k1)) == ChainMode::literal_k1);
    CHECK_THROWS_AS((void)parse_mode("verbatim"), const config_error&);
}
