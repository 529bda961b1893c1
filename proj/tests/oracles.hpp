#pragma once

// Independent reference implementations used only by the test suite. These
// deliberately avoid the library's incremental algorithms: every box is
// refit from scratch, weights come straight from the Gamma function.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "dxa/core.hpp"

namespace oracle {

/// Textbook least-squares line over y[0..m) against x[0..m), accumulated in
/// long double. The checked tolerances sit below double's cancellation floor
/// on ramp-dominated profiles.
struct Line {
    long double intercept = 0.0L;
    long double slope = 0.0L;
};

inline Line ols_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    long double xbar = 0.0L, ybar = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<long double>(m);
    ybar /= static_cast<long double>(m);
    long double sxx = 0.0L, sxy = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    const long double slope = sxy / sxx;
    return {ybar - slope * xbar, slope};
}

/// Naive detrended covariance at one scale: every box is refit from scratch
/// and the residuals are formed explicitly.
inline double detrended_covariance_naive(const dxa::Profile& A, const dxa::Profile& B,
                                         std::size_t n) {
    const std::size_t N = A.size();
    const std::size_t boxes = N - n;
    const std::size_t m = n + 1;
    std::vector<double> t(m), wa(m), wb(m);
    for (std::size_t i = 0; i < m; ++i)
        t[i] = static_cast<double>(i);

    long double total = 0.0L;
    for (std::size_t s = 0; s < boxes; ++s) {
        for (std::size_t i = 0; i < m; ++i) {
            wa[i] = A.values[s + i];
            wb[i] = B.values[s + i];
        }
        const Line la = ols_line(t, wa);
        const Line lb = ols_line(t, wb);
        long double box = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            const long double ra = wa[i] - (la.intercept + la.slope * t[i]);
            const long double rb = wb[i] - (lb.intercept + lb.slope * t[i]);
            box += ra * rb;
        }
        total += box / static_cast<long double>(n - 1);
    }
    return static_cast<double>(total / static_cast<long double>(boxes));
}

/// High-precision fractional weight straight from the Gamma form
/// rho * Gamma(j - rho) / (Gamma(1 - rho) * Gamma(1 + j)).
inline long double arfima_weight_gamma(double rho, std::size_t j) {
    const auto r = static_cast<long double>(rho);
    const auto jd = static_cast<long double>(j);
    return r * std::exp(std::lgamma(jd - r) - std::lgamma(1.0L - r) - std::lgamma(jd + 1.0L));
}

/// Deterministic uniform(-1, 1)-ish test data.
inline std::vector<double> random_values(std::uint64_t seed, std::size_t count,
                                         double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> out(count);
    for (auto& v : out)
        v = dist(rng);
    return out;
}

} // namespace oracle
