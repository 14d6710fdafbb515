#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "signet/keychain.hpp"
#include "oracles.hpp"

using namespace signet;

TEST_CASE("generator layout, absorbing k=2") {
    // states {0,1,2}, up (k-i)lam, down i*mu, S_2 absorbing
    const auto q = build_generator(2, 2.0, 3.0, ChainMode::absorbing);
    const std::vector<double> want{
        -4.0, 4.0, 0.0, //
        3.0,  -5.0, 2.0, //
        0.0,  0.0, 0.0, //
    };
    REQUIRE(q.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(q[i] == doctest::Approx(want[i]));
}

TEST_CASE("generator layout, literal k=1 keeps the return term") {
    const auto q = build_generator(1, 2.0, 3.0, ChainMode::literal_k1);
    // dp0 = mu p1 - lam p0, dp1 = lam p0: row sums no longer vanish
    const std::vector<double> want{-2.0, 2.0, 3.0, 0.0};
    REQUIRE(q.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(q[i] == doctest::Approx(want[i]));
    CHECK_THROWS_AS(build_generator(2, 2.0, 3.0, ChainMode::literal_k1), const mode_error&);
}

TEST_CASE("occupancy invariants hold on the solver grid") {
    for (const char* name : {"const", "exp-const", "log-log"}) {
        const OccupancyTrajectory occ = solve_occupancy(preset(name), 3, 30.0);
        REQUIRE(occ.times.size() >= 2);
        double prev_pk = -1.0;
        for (std::size_t i = 0; i < occ.times.size(); ++i) {
            double sum = 0.0;
            for (int j = 0; j <= 3; ++j) {
                const double pj = occ.p_at(i, j);
                REQUIRE(pj >= 0.0);
                REQUIRE(pj <= 1.0);
                sum += pj;
            }
            REQUIRE(std::fabs(sum - 1.0) < 1e-8);
            REQUIRE(occ.p_at(i, 3) >= prev_pk);
            prev_pk = occ.p_at(i, 3);
        }
        CHECK(occ.a_hat.front() == doctest::Approx(0.0));
        CHECK(occ.cum_survival.front() == doctest::Approx(0.0));
    }
}

TEST_CASE("frozen-rate occupancy agrees with the matrix exponential") {
    // constant rates freeze the generator, so p(t) = p(0) exp(Qt); the Q here
    // is written out by hand rather than taken from build_generator
    const double lam = 0.45, mu = 0.65, t = 2.5;
    const int k = 3;
    oracle::mat q{
        -3 * lam, 3 * lam,            0.0,      0.0, //
        mu,       -(mu + 2 * lam),    2 * lam,  0.0, //
        0.0,      2 * mu,             -(2 * mu + lam), lam, //
        0.0,      0.0,                0.0,      0.0, //
    };
    for (double& v : q) v *= t;
    const oracle::mat et = oracle::mat_expm(q, 4); // row i = distribution from state i

    const OccupancyTrajectory occ = solve_occupancy(preset("const"), k, t);
    const std::size_t last = occ.times.size() - 1;
    REQUIRE(occ.times[last] == doctest::Approx(t));
    for (int j = 0; j <= k; ++j)
        CHECK(occ.p_at(last, j) == doctest::Approx(et[static_cast<std::size_t>(j)]).epsilon(1e-8));
}

TEST_CASE("constant-rate hitting times match the dense linear-system oracle") {
    const RatePair rp = preset("const");
    for (int k = 1; k <= 6; ++k) {
        const double want = oracle::bd_hitting(k, 0, 0.45, 0.65);
        const HittingResult got = expected_hitting_time_auto(rp, k);
        CHECK_MESSAGE(std::fabs(got.value - want) / want < 1e-6, "k=", k, " got=", got.value,
                      " want=", want);
        CHECK(got.tail_bound < 1e-5);
        // and the recursion-based helper agrees with the same oracle
        CHECK(bd_expected_absorption(k, 0, 0.45, 0.65) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("hitting times grow strictly with k") {
    const RatePair rp = preset("exp-const");
    double prev = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double v = expected_hitting_time_auto(rp, k).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("a binding cap raises horizon_exceeded with a usable partial value") {
    const RatePair rp = preset("const");
    try {
        (void)expected_hitting_time(rp, 6, {}, 1e-8, ChainMode::absorbing, 50.0);
        FAIL("expected horizon_exceeded");
    } catch (const horizon_exceeded& e) {
        CHECK(e.partial_value > 0.0);
        CHECK(e.partial_value < 65.7);
        CHECK(e.tail_bound > 0.0);
    }
    // the auto variant grows the cap instead and lands on the converged value
    const HittingResult r = expected_hitting_time_auto(rp, 6, {}, 1e-8, ChainMode::absorbing, 50.0);
    CHECK(r.value == doctest::Approx(65.6725193075).epsilon(1e-6));
}

TEST_CASE("fixed-horizon protocol value stays below the converged value") {
    const RatePair rp = preset("const");
    const double fixed = hitting_time_fixed_horizon(rp, 6, 300.0);
    const double converged = expected_hitting_time_auto(rp, 6).value;
    CHECK(fixed == doctest::Approx(65.0751377089).epsilon(1e-8));
    CHECK(fixed < converged);
}

TEST_CASE("literal k=1 reproduces its closed construction") {
    // library value cross-checked by a fixed-step RK4 march of the literal
    // system [a, p0, p1, cum] up to the p1 = 1 crossing
    const RatePair rp = preset("const");
    const HittingResult lib = expected_hitting_time(rp, 1, {}, 1e-8, ChainMode::literal_k1);
    CHECK(lib.tail_bound == doctest::Approx(0.0));

    auto rhs = [&](double, const oracle::vec& y, oracle::vec& dy) {
        const double a = std::min(std::max(y[0], 0.0), 1.0);
        const double lam = rp.lambda(a), mu = rp.mu(a);
        dy[0] = (1.0 - a) * lam - a * mu;
        dy[1] = mu * y[2] - lam * y[1];
        dy[2] = lam * y[1];
        dy[3] = 1.0 - y[2];
    };
    const oracle::Crossing c = oracle::rk4_until(
        rhs, {0.0, 1.0, 0.0, 0.0}, 0.0, 1e-4, [](const oracle::vec& y) { return y[2] - 1.0; },
        200000);
    CHECK(lib.value == doctest::Approx(c.y[3]).epsilon(1e-5));
    CHECK(lib.value == doctest::Approx(1.3661124115).epsilon(1e-7));
    CHECK(c.t == doctest::Approx(2.7632355846).epsilon(1e-5));
}

TEST_CASE("argument validation") {
    const RatePair rp = preset("const");
    CHECK_THROWS_AS((void)expected_hitting_time(rp, 0), const invalid_k&);
    CHECK_THROWS_AS((void)expected_hitting_time(rp, -2), const invalid_k&);
    CHECK_THROWS_AS((void)expected_hitting_time(rp, 2, {}, 1e-8, ChainMode::literal_k1),
                    const mode_error&);
    CHECK_THROWS_AS((void)solve_occupancy(rp, 0, 1.0), const invalid_k&);
}

TEST_CASE("activation rate is flat lambda for absorbing k=1 with constant rates") {
    // m_1 = lam p0 / (1 - p1) and 1 - p1 = p0, so the hazard is exactly lam
    const RatePair rp = preset("const");
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(i * 0.1);
    const RateCurve mk = activation_rate(rp, 1, grid);
    REQUIRE(mk.times.size() == grid.size());
    CHECK_FALSE(mk.truncated);
    for (double v : mk.values) CHECK(v == doctest::Approx(0.45).epsilon(1e-7));
}

TEST_CASE("activation rate truncates once survival underflows") {
    // aging at k=1: survival collapses long before t = 600
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(i * 10.0);
    const RateCurve mk = activation_rate(preset("aging"), 1, grid);
    CHECK(mk.truncated);
    CHECK(mk.times.size() < grid.size());
    CHECK(mk.times.size() > 5);
}

TEST_CASE("optimal k for the constant preset in both modes") {
    const HittingSummary abs = optimal_k(preset("const"), 0.4, 6, ChainMode::absorbing);
    CHECK(abs.tau_hat == doctest::Approx(std::log(45.0) / 1.1).epsilon(1e-7));
    REQUIRE(abs.records.size() == 6);
    CHECK(abs.records[0].value == doctest::Approx(2.2222222222).epsilon(1e-6));
    CHECK(abs.k_c_minus == 1);
    CHECK(abs.k_c_plus == 2);
    CHECK(abs.k_c == 1); // |2.22 - 3.46| < |4.94 - 3.46|

    const HittingSummary lit = optimal_k(preset("const"), 0.4, 6, ChainMode::literal_k1);
    CHECK(lit.records[0].value == doctest::Approx(1.3661124115).epsilon(1e-6));
    CHECK(lit.k_c == 2); // |4.94 - 3.46| < |1.37 - 3.46|
    // k >= 2 is absorbing in both summaries
    CHECK(lit.records[1].value == doctest::Approx(abs.records[1].value).epsilon(1e-10));
}

TEST_CASE("optimal k refuses an unreachable threshold") {
    CHECK_THROWS_AS((void)optimal_k(preset("const"), 0.5, 4), const unreachable_gamma&);
}
