#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "signet/errors.hpp"

namespace signet {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double initial_step = 0.0; // <= 0: choose automatically
    std::size_t max_steps = 50'000'000;
};

// Quartic interpolant over one accepted step, coefficients in the
// standard Dormand-Prince continuous-extension form.
class StepInterpolant {
public:
    StepInterpolant(double t0, double t1, std::size_t dim, const double* rcont)
        : t0_(t0), t1_(t1), dim_(dim), rcont_(rcont) {}

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    std::size_t dim() const { return dim_; }

    double eval(double t, std::size_t comp) const {
        const double theta = (t - t0_) / (t1_ - t0_);
        const double theta1 = 1.0 - theta;
        const double* c = rcont_ + 5 * comp;
        return c[0] + theta * (c[1] + theta1 * (c[2] + theta * (c[3] + theta1 * c[4])));
    }

    void eval(double t, std::span<double> out) const {
        for (std::size_t i = 0; i < dim_; ++i) out[i] = eval(t, i);
    }

private:
    double t0_, t1_;
    std::size_t dim_;
    const double* rcont_; // dim * 5, grouped per component
};

// Piecewise-polynomial solution built from accepted steps.
class DenseSolution {
public:
    DenseSolution() = default;

    std::size_t dim() const { return dim_; }
    std::size_t step_count() const { return times_.empty() ? 0 : times_.size() - 1; }
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }

    double node(std::size_t i, std::size_t comp) const { return nodes_[i * dim_ + comp]; }

    StepInterpolant step(std::size_t i) const {
        return StepInterpolant(times_[i], times_[i + 1], dim_, rcont_.data() + i * 5 * dim_);
    }

    double eval(double t, std::size_t comp) const { return step(locate(t)).eval(t, comp); }
    void eval(double t, std::span<double> out) const { step(locate(t)).eval(t, out); }

    void start(std::size_t dim, double t0, std::span<const double> y0) {
        dim_ = dim;
        times_.assign(1, t0);
        nodes_.assign(y0.begin(), y0.end());
        rcont_.clear();
    }

    void push_step(double t1, std::span<const double> y1, std::span<const double> rcont) {
        times_.push_back(t1);
        nodes_.insert(nodes_.end(), y1.begin(), y1.end());
        rcont_.insert(rcont_.end(), rcont.begin(), rcont.end());
    }

private:
    std::size_t locate(double t) const;

    std::size_t dim_ = 0;
    std::vector<double> times_;  // accepted node times, step_count()+1
    std::vector<double> nodes_;  // node values, (step_count()+1) x dim
    std::vector<double> rcont_;  // step_count() x dim x 5
};

enum class StepVerdict { proceed, stop };

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5, dp_c3 = 3.0 / 10, dp_c4 = 4.0 / 5, dp_c5 = 8.0 / 9;
inline constexpr double dp_a21 = 1.0 / 5;
inline constexpr double dp_a31 = 3.0 / 40, dp_a32 = 9.0 / 40;
inline constexpr double dp_a41 = 44.0 / 45, dp_a42 = -56.0 / 15, dp_a43 = 32.0 / 9;
inline constexpr double dp_a51 = 19372.0 / 6561, dp_a52 = -25360.0 / 2187,
                        dp_a53 = 64448.0 / 6561, dp_a54 = -212.0 / 729;
inline constexpr double dp_a61 = 9017.0 / 3168, dp_a62 = -355.0 / 33, dp_a63 = 46732.0 / 5247,
                        dp_a64 = 49.0 / 176, dp_a65 = -5103.0 / 18656;
inline constexpr double dp_a71 = 35.0 / 384, dp_a73 = 500.0 / 1113, dp_a74 = 125.0 / 192,
                        dp_a75 = -2187.0 / 6784, dp_a76 = 11.0 / 84;
inline constexpr double dp_e1 = 71.0 / 57600, dp_e3 = -71.0 / 16695, dp_e4 = 71.0 / 1920,
                        dp_e5 = -17253.0 / 339200, dp_e6 = 22.0 / 525, dp_e7 = -1.0 / 40;
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0,
                        dp_d3 = 87487479700.0 / 32700410799.0,
                        dp_d4 = -10690763975.0 / 1880347072.0,
                        dp_d5 = 701980252875.0 / 199316789632.0,
                        dp_d6 = -1453857185.0 / 822651844.0,
                        dp_d7 = 69997945.0 / 29380423.0;

} // namespace detail

// Adaptive Dormand-Prince 5(4) with dense output. Integrates y' = rhs(t, y)
// from t0 to t1; after every accepted step `watch` sees the step interpolant
// and may stop the integration early (the solution then ends at that node).
// Throws numerical_failure on step underflow or a non-finite state.
template <typename Rhs, typename Watch>
DenseSolution integrate_dense(Rhs&& rhs, std::span<const double> y0, double t0, double t1,
                              const OdeOptions& opt, Watch&& watch) {
    using namespace detail;
    const std::size_t n = y0.size();
    const double uround = std::numeric_limits<double>::epsilon();

    std::vector<double> y(y0.begin(), y0.end()), ynew(n), ytmp(n), err(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> rcont(5 * n);

    auto error_norm = [&](const std::vector<double>& e, const std::vector<double>& ya,
                          const std::vector<double>& yb) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double q = e[i] / sc;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<double>(n));
    };

    DenseSolution sol;
    sol.start(n, t0, y);

    double t = t0;
    rhs(t, std::span<const double>(y), std::span<double>(k1));

    // initial step size, Hairer-style
    double h = opt.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        d1 = std::sqrt(d1 / n);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t1 - t0);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
        rhs(t + h0, std::span<const double>(ytmp), std::span<double>(k2));
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::max(d1, d2);
        double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, t1 - t0});
    }

    bool rejected = false;
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) return sol;
        if (h > t1 - t) h = t1 - t;
        if (h < 16.0 * uround * std::max(1.0, std::abs(t)))
            throw numerical_failure("step size underflow", t);

        auto stage = [&](double c, std::vector<double>& k) {
            rhs(t + c * h, std::span<const double>(ytmp), std::span<double>(k));
        };
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * dp_a21 * k1[i];
        stage(dp_c2, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (dp_a31 * k1[i] + dp_a32 * k2[i]);
        stage(dp_c3, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
        stage(dp_c4, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] + dp_a54 * k4[i]);
        stage(dp_c5, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                                  dp_a64 * k4[i] + dp_a65 * k5[i]);
        stage(1.0, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (dp_a71 * k1[i] + dp_a73 * k3[i] + dp_a74 * k4[i] +
                                  dp_a75 * k5[i] + dp_a76 * k6[i]);
        rhs(t + h, std::span<const double>(ynew), std::span<double>(k7));

        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] + dp_e5 * k5[i] +
                          dp_e6 * k6[i] + dp_e7 * k7[i]);
        const double errn = error_norm(err, y, ynew);
        if (!std::isfinite(errn)) throw numerical_failure("non-finite state", t);

        if (errn <= 1.0) {
            // accept; dense coefficients before y is overwritten
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                double* c = rcont.data() + 5 * i;
                c[0] = y[i];
                c[1] = ydiff;
                c[2] = bspl;
                c[3] = ydiff - h * k7[i] - bspl;
                c[4] = h * (dp_d1 * k1[i] + dp_d3 * k3[i] + dp_d4 * k4[i] + dp_d5 * k5[i] +
                            dp_d6 * k6[i] + dp_d7 * k7[i]);
            }
            const double tnew = t + h;
            sol.push_step(tnew, ynew, rcont);
            const StepVerdict verdict = watch(sol.step(sol.step_count() - 1));

            t = tnew;
            std::swap(y, ynew);
            std::swap(k1, k7); // FSAL

            if (verdict == StepVerdict::stop) return sol;

            double fac = 0.9 * std::pow(std::max(errn, 1e-10), -0.2);
            fac = std::min(rejected ? 1.0 : 10.0, std::max(0.2, fac));
            h *= fac;
            rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(errn, -0.2));
            rejected = true;
        }
    }
    throw numerical_failure("step budget exhausted", t);
}

template <typename Rhs>
DenseSolution integrate_dense(Rhs&& rhs, std::span<const double> y0, double t0, double t1,
                              const OdeOptions& opt) {
    return integrate_dense(std::forward<Rhs>(rhs), y0, t0, t1, opt,
                           [](const StepInterpolant&) { return StepVerdict::proceed; });
}

// Bisection for a bracketed root of f on [lo, hi], to interval width tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace signet
