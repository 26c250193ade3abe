#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "alh/common.hpp"

namespace alh {

// Log-linear decay fit with threshold model selection. Samples are matched
// against C (r+1)^k e^{-b r} for k in {0, 1}; the corrected model (k = 1)
// exists because a rate at the critical threshold is otherwise
// indistinguishable from a slightly smaller plain exponent.
struct DecayFit {
    double exponent = 0.0;       // decay-positive sign convention
    bool log_correction = false; // k == 1 selected
    double constant = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::size_t sample_count = 0;
    double rms_residual = 0.0;          // in log space
    double model_selection_score = 0.0; // AICc(plain) - AICc(corrected)
    bool zero_sentinel = false;         // all samples below the zero floor

    // growth-convention exponent; -inf for identically-zero data
    double growth() const {
        return zero_sentinel ? -std::numeric_limits<double>::infinity()
                             : -exponent;
    }
};

namespace detail {

struct LinFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rss = 0.0;
};

inline LinFit least_squares(std::span<const double> x,
                            std::span<const double> z) {
    const std::size_t m = x.size();
    double sx = 0, sz = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sz += z[i];
    }
    const double mx = sx / m, mz = sz / m;
    double sxx = 0, sxz = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxz += (x[i] - mx) * (z[i] - mz);
    }
    if (sxx <= 0.0)
        throw degenerate_data_error("decay fit: degenerate abscissae");
    LinFit f;
    f.slope = sxz / sxx;
    f.intercept = mz - f.slope * mx;
    for (std::size_t i = 0; i < m; ++i) {
        const double res = z[i] - (f.intercept + f.slope * x[i]);
        f.rss += res * res;
    }
    return f;
}

inline double aicc(double rss, std::size_t m) {
    // p = 3 estimated quantities (constant, rate, noise scale)
    constexpr double p = 3.0;
    const double floored = std::max(rss, 1e-30);
    return static_cast<double>(m) * std::log(floored / static_cast<double>(m)) +
           2.0 * p +
           2.0 * p * (p + 1.0) / (static_cast<double>(m) - p - 1.0);
}

}  // namespace detail

inline DecayFit fit_decay(std::span<const double> r, std::span<const double> v,
                          double window_lo, double window_hi) {
    if (r.size() != v.size())
        throw fit_domain_error("decay fit: mismatched sample arrays");
    std::vector<double> rs, vs;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] >= window_lo && r[i] <= window_hi) {
            rs.push_back(r[i]);
            vs.push_back(v[i]);
        }
    DecayFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.sample_count = rs.size();

    bool all_zero = true;
    for (double x : vs)
        if (std::abs(x) >= kZeroFloor) all_zero = false;
    if (all_zero && !vs.empty()) {
        fit.zero_sentinel = true;
        fit.exponent = std::numeric_limits<double>::infinity();
        return fit;
    }
    if (rs.size() < 10)
        throw fit_domain_error("decay fit: window holds fewer than 10 samples");
    for (double x : vs)
        if (!(x > 0.0))
            throw fit_domain_error(
                "decay fit: nonpositive sample inside the fit window");

    std::vector<double> z0(vs.size()), z1(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        z0[i] = std::log(vs[i]);
        z1[i] = z0[i] - std::log(rs[i] + 1.0);
    }
    const auto f0 = detail::least_squares(rs, z0);
    const auto f1 = detail::least_squares(rs, z1);
    const double aicc0 = detail::aicc(f0.rss, vs.size());
    const double aicc1 = detail::aicc(f1.rss, vs.size());
    fit.model_selection_score = aicc0 - aicc1;
    const bool corrected = aicc1 < aicc0;
    const auto& best = corrected ? f1 : f0;
    fit.log_correction = corrected;
    fit.exponent = -best.slope;
    fit.constant = std::exp(best.intercept);
    fit.rms_residual = std::sqrt(best.rss / static_cast<double>(vs.size()));
    return fit;
}

inline DecayFit fit_decay(std::span<const double> r,
                          std::span<const double> v) {
    if (r.empty()) throw fit_domain_error("decay fit: empty sample set");
    return fit_decay(r, v, r.front(), r.back());
}

}  // namespace alh
