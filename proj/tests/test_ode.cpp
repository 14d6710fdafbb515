#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "signet/ode.hpp"
#include "oracles.hpp"

using namespace signet;

namespace {

void decay(double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; }

void oscillator(double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
}

} // namespace

TEST_CASE("exponential decay against the closed form") {
    OdeOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-14;
    const std::vector<double> y0{1.0};
    const DenseSolution sol = integrate_dense(decay, y0, 0.0, 5.0, opt);
    CHECK(sol.t_end() == doctest::Approx(5.0));
    for (double t : {0.25, 1.0, 2.5, 4.9, 5.0})
        CHECK(sol.eval(t, 0) == doctest::Approx(std::exp(-t)).epsilon(1e-9));
}

TEST_CASE("dense output is accurate between the accepted nodes") {
    OdeOptions opt;
    opt.rtol = 1e-8;
    opt.atol = 1e-12;
    const std::vector<double> y0{1.0, 0.0};
    const DenseSolution sol = integrate_dense(oscillator, y0, 0.0, 10.0, opt);
    // probe inside every step, not just at the nodes
    for (std::size_t i = 0; i < sol.step_count(); ++i) {
        const StepInterpolant st = sol.step(i);
        const double tm = 0.5 * (st.t0() + st.t1());
        CHECK(st.eval(tm, 0) == doctest::Approx(std::cos(tm)).epsilon(5e-8));
        CHECK(st.eval(tm, 1) == doctest::Approx(-std::sin(tm)).epsilon(5e-8));
    }
}

TEST_CASE("oscillator energy drift stays near the tolerance") {
    OdeOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    const std::vector<double> y0{1.0, 0.0};
    const DenseSolution sol = integrate_dense(oscillator, y0, 0.0, 20.0, opt);
    const double x = sol.eval(20.0, 0), v = sol.eval(20.0, 1);
    CHECK(std::fabs(x * x + v * v - 1.0) < 1e-8);
}

TEST_CASE("tightening rtol tightens the answer") {
    auto run = [](double rtol) {
        OdeOptions opt;
        opt.rtol = rtol;
        opt.atol = 1e-14;
        const std::vector<double> y0{1.0};
        return integrate_dense(decay, y0, 0.0, 3.0, opt).eval(3.0, 0);
    };
    const double loose = std::fabs(run(1e-4) - std::exp(-3.0));
    const double tight = std::fabs(run(1e-10) - std::exp(-3.0));
    CHECK(tight < loose);
    CHECK(tight < 1e-10);
}

TEST_CASE("agrees with the fixed-step RK4 oracle on a nonlinear problem") {
    // logistic growth y' = y(1-y)
    auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0] * (1.0 - y[0]);
    };
    OdeOptions opt;
    const std::vector<double> y0{0.05};
    const DenseSolution sol = integrate_dense(rhs, y0, 0.0, 8.0, opt);

    const oracle::vec ref = oracle::rk4(
        [](double, const oracle::vec& y, oracle::vec& dy) { dy[0] = y[0] * (1.0 - y[0]); },
        {0.05}, 0.0, 8.0, 200000);
    CHECK(sol.eval(8.0, 0) == doctest::Approx(ref[0]).epsilon(1e-9));
}

TEST_CASE("watch callback stops at a crossing that bisection then refines") {
    OdeOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-14;
    const std::vector<double> y0{1.0};
    double t_cross = -1.0;
    const DenseSolution sol =
        integrate_dense(decay, y0, 0.0, 10.0, opt, [&](const StepInterpolant& st) {
            if (st.eval(st.t1(), 0) <= 0.5) {
                t_cross = bisect([&](double t) { return st.eval(t, 0) - 0.5; }, st.t0(), st.t1(),
                                 1e-12);
                return StepVerdict::stop;
            }
            return StepVerdict::proceed;
        });
    CHECK(t_cross == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(sol.t_end() < 10.0); // stopped early
}

TEST_CASE("blow-up raises numerical_failure") {
    auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0] * y[0];
    };
    const std::vector<double> y0{1.0}; // finite-time singularity at t = 1
    OdeOptions opt;
    CHECK_THROWS_AS((void)integrate_dense(rhs, y0, 0.0, 2.0, opt), const numerical_failure&);
}

TEST_CASE("step budget exhaustion raises numerical_failure") {
    OdeOptions opt;
    opt.max_steps = 3;
    const std::vector<double> y0{1.0, 0.0};
    CHECK_THROWS_AS((void)integrate_dense(oscillator, y0, 0.0, 100.0, opt),
                    const numerical_failure&);
}

TEST_CASE("bisect finds a plain root") {
    const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}
