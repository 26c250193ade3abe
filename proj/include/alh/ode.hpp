#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "alh/linalg.hpp"

namespace alh {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-13;
    double h_max = 0.5;
    double state_cap = kStateCap;
    std::size_t max_steps = 20'000'000;
};

// Embedded Dormand-Prince 5(4) pair with PI-free step control. Integrates
// y' = f(t, y) from t0 through the increasing sample points, invoking
// on_sample(t, y) at each one. Steps are clamped to land exactly on samples.
//
// F: void(double t, const Vec& y, Vec& dy)
// S: void(double t, const Vec& y)
template <typename F, typename S>
void integrate_ode(F&& f, Vec y0, double t0, std::span<const double> samples,
                   const OdeOptions& opt, S&& on_sample) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const auto m = y0.size();
    Vec y = std::move(y0);
    Vec k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ytmp(m), ynew(m);

    double t = t0;
    std::size_t next = 0;
    while (next < samples.size() && samples[next] <= t + 1e-14 * (1 + std::abs(t))) {
        on_sample(samples[next], y);
        ++next;
    }
    if (next >= samples.size()) return;

    double h = std::min(opt.h_init, opt.h_max);
    std::size_t steps = 0;
    while (next < samples.size()) {
        if (++steps > opt.max_steps)
            throw numeric_abort_error("ODE step budget exhausted");
        const double target = samples[next];
        bool hit = false;
        if (t + h >= target) {
            h = target - t;
            hit = true;
        }

        f(t, y, k1);
        ytmp = y + h * a21 * k1;
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = ei / sc;
            err += q * q;
        }
        err = std::sqrt(err / static_cast<double>(m));

        if (!std::isfinite(err))
            throw numeric_abort_error("ODE state became non-finite");

        if (err <= 1.0) {
            t = hit ? target : t + h;
            y.swap(ynew);
            const double norm = y.cwiseAbs().maxCoeff();
            if (norm > opt.state_cap)
                throw numeric_abort_error(
                    "ODE state exceeded blow-up sentinel at t=" +
                    std::to_string(t) + " (|y|=" + std::to_string(norm) + ")");
            if (hit) {
                on_sample(target, y);
                ++next;
            }
        }
        const double fac =
            err > 0.0 ? 0.9 * std::pow(err, -0.2)
                      : 5.0;
        h = h * std::min(5.0, std::max(0.2, fac));
        h = std::min(h, opt.h_max);
        if (h < opt.h_min)
            throw stiffness_error("ODE step size underflow at t=" +
                                  std::to_string(t));
    }
}

}  // namespace alh
