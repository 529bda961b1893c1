#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dxa/core.hpp"
#include "dxa/errors.hpp"
#include "dxa/fluctuation.hpp"
#include "dxa/numeric.hpp"

namespace dxa {

enum class CorrelationKind { Auto, Cross };

/// Sample correlation function at lags 0..max_lag. Auto kind is normalized by
/// the variance (value at lag 0 is exactly 1); Cross by sigma * sigma'.
struct CorrelationFunction {
    std::vector<std::size_t> lags;
    std::vector<double> values;
    CorrelationKind kind = CorrelationKind::Auto;
};

namespace detail {

inline CorrelationFunction correlation_impl(const TimeSeries& a, const TimeSeries& b,
                                            std::size_t max_lag, CorrelationKind kind) {
    if (a.size() != b.size())
        throw InvalidInput("series must have equal length");
    const std::size_t N = a.size();
    if (max_lag >= N)
        throw InvalidParameter("max_lag must be < series length");

    const auto ma = moments(a);
    const auto mb = moments(b);
    if (ma.variance <= 0.0 || mb.variance <= 0.0)
        throw DegenerateInput("constant series has no correlation function");

    // Biased (1/N) covariance estimator at every lag. For the auto case the
    // normalizer is the variance itself, so lag 0 divides to exactly 1; for
    // the cross case it is sigma*sigma' unless the inputs are identical, in
    // which case the variance is reused so cross(x, x) == auto(x) bitwise.
    double norm;
    if (kind == CorrelationKind::Auto || a.samples() == b.samples())
        norm = ma.variance;
    else
        norm = std::sqrt(ma.variance * mb.variance);

    CorrelationFunction cf;
    cf.kind = kind;
    cf.lags.resize(max_lag + 1);
    cf.values.resize(max_lag + 1);
    const auto& ya = a.samples();
    const auto& yb = b.samples();
    for (std::size_t k = 0; k <= max_lag; ++k) {
        CompensatedSum acc;
        for (std::size_t i = 0; i + k < N; ++i)
            acc.add((ya[i] - ma.mean) * (yb[i + k] - mb.mean));
        cf.lags[k] = k;
        cf.values[k] = acc.value() / static_cast<double>(N) / norm;
    }
    return cf;
}

} // namespace detail

inline CorrelationFunction autocorrelation(const TimeSeries& series, std::size_t max_lag) {
    return detail::correlation_impl(series, series, max_lag, CorrelationKind::Auto);
}

/// Normalized cross-correlation at lags 0..max_lag of seriesB relative to
/// seriesA (positive lags look forward in B).
inline CorrelationFunction cross_correlation(const TimeSeries& seriesA,
                                             const TimeSeries& seriesB, std::size_t max_lag) {
    return detail::correlation_impl(seriesA, seriesB, max_lag, CorrelationKind::Cross);
}

/// Covariance of the n-step walks implied by a (symmetric) correlation
/// function:
///   n * X(0) + 2 * sum_{k=1}^{n-1} [n * X(k) - k * X(k)].
/// The caller chooses the scale of x.values (normalized or covariance units);
/// the result is on the same scale.
inline double walk_covariance_rhs(const CorrelationFunction& x, std::size_t n) {
    if (n < 1)
        throw InvalidParameter("walk length n must be >= 1");
    if (x.values.size() < n)
        throw InvalidInput("correlation function must cover lags 0.." + std::to_string(n - 1));
    detail::CompensatedSum acc;
    acc.add(static_cast<double>(n) * x.values[0]);
    for (std::size_t k = 1; k < n; ++k)
        acc.add(2.0 * (static_cast<double>(n) - static_cast<double>(k)) * x.values[k]);
    return acc.value();
}

/// Power-law fit y ~ amplitude * n^exponent obtained by ordinary least
/// squares on (log n, log y).
struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
    double exponent_stderr = 0.0;
    double r_squared = 0.0;
    /// For fluctuation curves: fraction of f2 < 0 inside the fit range.
    /// For correlation functions: fraction of lags excluded as nonpositive.
    double negative_fraction = 0.0;
    std::size_t points_used = 0;
};

namespace detail {

inline PowerLawFit loglog_ols(const std::vector<double>& logx, const std::vector<double>& logy,
                              std::size_t n_lo, std::size_t n_hi) {
    const std::size_t m = logx.size();
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < m; ++i) {
        sx.add(logx[i]);
        sy.add(logy[i]);
    }
    const double xbar = sx.value() / static_cast<double>(m);
    const double ybar = sy.value() / static_cast<double>(m);
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < m; ++i) {
        sxx.add((logx[i] - xbar) * (logx[i] - xbar));
        sxy.add((logx[i] - xbar) * (logy[i] - ybar));
    }
    const double slope = sxy.value() / sxx.value();
    const double intercept = ybar - slope * xbar;

    CompensatedSum srss, stot;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = logy[i] - (intercept + slope * logx[i]);
        srss.add(r * r);
        stot.add((logy[i] - ybar) * (logy[i] - ybar));
    }
    const double rss = std::max(srss.value(), 0.0);
    const double tot = stot.value();

    PowerLawFit fit;
    fit.exponent = slope;
    fit.amplitude = std::exp(intercept);
    fit.n_lo = n_lo;
    fit.n_hi = n_hi;
    fit.points_used = m;
    fit.exponent_stderr =
        m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx.value()) : 0.0;
    fit.r_squared = tot > 0.0 ? std::clamp(1.0 - rss / tot, 0.0, 1.0) : 1.0;
    return fit;
}

} // namespace detail

/// Fit |f_signed| against scale over grid entries in [n_lo, n_hi]. Records
/// the fraction of scales in range whose f2 is negative; a zero value in
/// range has no logarithm and is rejected.
inline PowerLawFit fit_power_law(const FluctuationCurve& curve, std::size_t n_lo,
                                 std::size_t n_hi) {
    if (n_lo >= n_hi)
        throw InvalidParameter("fit range must satisfy n_lo < n_hi");
    std::vector<double> lx, ly;
    std::size_t negatives = 0;
    std::size_t lo_used = 0, hi_used = 0;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const std::size_t n = curve.grid.scales[i];
        if (n < n_lo || n > n_hi)
            continue;
        const double fs = curve.f_signed[i];
        if (fs == 0.0)
            throw DegenerateInput("zero fluctuation value at scale " + std::to_string(n));
        if (curve.f2[i] < 0.0)
            ++negatives;
        if (lx.empty())
            lo_used = n;
        hi_used = n;
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(std::abs(fs)));
    }
    if (lx.size() < 3)
        throw InvalidInput("power-law fit needs at least 3 grid points in range");
    // recorded range is the effective one: first and last scale actually used
    PowerLawFit fit = detail::loglog_ols(lx, ly, lo_used, hi_used);
    fit.negative_fraction = static_cast<double>(negatives) / static_cast<double>(lx.size());
    return fit;
}

/// Fit the decay of a correlation function over lags in [n_lo, n_hi].
/// Nonpositive values cannot enter a log-log fit; they are excluded and
/// their fraction reported in negative_fraction.
inline PowerLawFit fit_power_law(const CorrelationFunction& corr, std::size_t n_lo,
                                 std::size_t n_hi) {
    if (n_lo < 1)
        throw InvalidParameter("correlation fits start at lag >= 1");
    if (n_lo >= n_hi)
        throw InvalidParameter("fit range must satisfy n_lo < n_hi");
    std::vector<double> lx, ly;
    std::size_t excluded = 0, in_range = 0;
    std::size_t lo_used = 0, hi_used = 0;
    for (std::size_t i = 0; i < corr.lags.size(); ++i) {
        const std::size_t k = corr.lags[i];
        if (k < n_lo || k > n_hi)
            continue;
        ++in_range;
        if (corr.values[i] <= 0.0) {
            ++excluded;
            continue;
        }
        if (lx.empty())
            lo_used = k;
        hi_used = k;
        lx.push_back(std::log(static_cast<double>(k)));
        ly.push_back(std::log(corr.values[i]));
    }
    if (lx.size() < 3)
        throw InvalidInput("power-law fit needs at least 3 positive lags in range");
    PowerLawFit fit = detail::loglog_ols(lx, ly, lo_used, hi_used);
    fit.negative_fraction =
        in_range > 0 ? static_cast<double>(excluded) / static_cast<double>(in_range) : 0.0;
    return fit;
}

/// Covariance scaling exponent implied by a cross-correlation decay exponent:
/// lambda = 1 - gamma_cross / 2 for 0 < gamma_cross < 1.
inline double lambda_from_gamma(double gamma_cross) {
    if (!(gamma_cross > 0.0 && gamma_cross < 1.0))
        throw InvalidParameter("gamma_cross out of (0, 1): " + std::to_string(gamma_cross));
    return 1.0 - 0.5 * gamma_cross;
}

enum class Diagnosis { UniquePowerLaw, NoUniquePowerLaw };

inline const char* to_string(Diagnosis d) {
    return d == Diagnosis::UniquePowerLaw ? "UniquePowerLaw" : "NoUniquePowerLaw";
}

struct DiagnosisThresholds {
    /// A negative fraction inside (tau, 1 - tau) means the covariance sign is
    /// mixed rather than essentially one-signed.
    double tau = 0.05;
    double r2_min = 0.98;
};

/// Decide whether a DXA curve follows a single power law. A curve whose
/// detrended covariance changes sign inside the fit range, carries a mixed
/// sign fraction, or fits poorly indicates no unique power-law
/// cross-correlation (only short-range or no cross-correlation at all).
inline Diagnosis cross_correlation_diagnosis(const FluctuationCurve& curve,
                                             const PowerLawFit& fit,
                                             DiagnosisThresholds thresholds = {}) {
    if (curve.kind != CurveKind::DXA)
        throw InvalidInput("diagnosis applies to DXA curves");

    bool sign_change = false;
    bool seen = false;
    double prev = 0.0;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const std::size_t n = curve.grid.scales[i];
        if (n < fit.n_lo || n > fit.n_hi)
            continue;
        if (seen && curve.f2[i] * prev < 0.0)
            sign_change = true;
        prev = curve.f2[i];
        seen = true;
    }

    const bool mixed_sign = fit.negative_fraction > thresholds.tau &&
                            fit.negative_fraction < 1.0 - thresholds.tau;
    if (sign_change || mixed_sign || fit.r_squared < thresholds.r2_min)
        return Diagnosis::NoUniquePowerLaw;
    return Diagnosis::UniquePowerLaw;
}

} // namespace dxa
