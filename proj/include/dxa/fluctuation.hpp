#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dxa/core.hpp"
#include "dxa/errors.hpp"
#include "dxa/numeric.hpp"

namespace dxa {

/// Box sizes n for the fluctuation analysis. Each box spans n+1 consecutive
/// profile points; valid scales satisfy 4 <= n <= N-1.
struct ScaleGrid {
    std::vector<std::size_t> scales;

    std::size_t size() const { return scales.size(); }
    std::size_t front() const { return scales.front(); }
    std::size_t back() const { return scales.back(); }
};

/// Logarithmically spaced integer grid, inclusive of both endpoints,
/// duplicates collapsed. Returns at most `points` scales.
inline ScaleGrid scale_grid(std::size_t n_min, std::size_t n_max, std::size_t points) {
    if (n_min < 4)
        throw InvalidParameter("minimum scale must be >= 4");
    if (n_min >= n_max)
        throw InvalidParameter("scale bounds must satisfy n_min < n_max");
    if (points < 2)
        throw InvalidParameter("grid needs at least 2 points");

    const double lo = std::log(static_cast<double>(n_min));
    const double hi = std::log(static_cast<double>(n_max));
    std::vector<std::size_t> scales;
    scales.reserve(points);
    for (std::size_t j = 0; j < points; ++j) {
        const double x = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(points - 1);
        auto n = static_cast<std::size_t>(std::llround(std::exp(x)));
        n = std::clamp(n, n_min, n_max);
        scales.push_back(n);
    }
    scales.front() = n_min;
    scales.back() = n_max;
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    return ScaleGrid{std::move(scales)};
}

enum class CurveKind { DFA, DXA };

inline const char* to_string(CurveKind k) { return k == CurveKind::DFA ? "DFA" : "DXA"; }

/// Per-scale detrended covariance (DXA) or variance (DFA). f2 keeps the sign
/// of the covariance; f_signed = sign(f2) * sqrt(|f2|) is the quantity whose
/// log-log slope is the scaling exponent.
struct FluctuationCurve {
    ScaleGrid grid;
    std::vector<double> f2;
    std::vector<double> f_signed;
    CurveKind kind = CurveKind::DFA;
    std::size_t series_length = 0;
};

struct LinearTrend {
    double intercept = 0.0; // ordinate at k = 0
    double slope = 0.0;

    double value_at(double k) const { return intercept + slope * k; }
};

/// Ordinary least-squares line through the n+1 profile points
/// values[start..start+n], fitted against the 1-based sample positions
/// k = start+1 .. start+n+1. `start` is a 0-based index.
inline LinearTrend local_trend_fit(const Profile& profile, std::size_t start, std::size_t n) {
    const std::size_t N = profile.size();
    if (n < 1 || start + n >= N)
        throw InvalidInput("trend box [" + std::to_string(start) + ", " +
                           std::to_string(start + n) + "] out of range for length " +
                           std::to_string(N));
    const std::size_t m = n + 1;
    const double kbar = static_cast<double>(start + 1) + static_cast<double>(n) / 2.0;
    detail::CompensatedSum sy;
    for (std::size_t t = 0; t < m; ++t)
        sy.add(profile.values[start + t]);
    const double ybar = sy.value() / static_cast<double>(m);

    detail::CompensatedSum sxy, sxx;
    for (std::size_t t = 0; t < m; ++t) {
        const double dk = static_cast<double>(start + 1 + t) - kbar;
        sxy.add(dk * (profile.values[start + t] - ybar));
        sxx.add(dk * dk);
    }
    const double slope = sxy.value() / sxx.value();
    return LinearTrend{ybar - slope * kbar, slope};
}

namespace detail {

/// Mean over all N-n overlapping boxes of the per-box detrended covariance
///   f2(n, s) = 1/(n-1) * sum_t residA(t) * residB(t),
/// each box detrended by its own least-squares line per profile.
///
/// Work is O(N) per scale: the five window sums the box statistics need
/// (sum A, sum t*A, sum B, sum t*B, sum A*B over local abscissa t = 0..n)
/// slide in O(1) per box,
///   U(s+1) = U(s) - A[s] + A[s+n+1]
///   V(s+1) = V(s) - U(s) + A[s] + n * A[s+n+1]
/// with Neumaier compensation on every rolling sum. The per-box combination
/// runs in extended precision: residual cancellation happens at the scale of
/// the window sums, several orders above the covariance that survives it.
///
/// The residual cross sum is evaluated in the symmetrized closed form
///   C = P - [(aA*U_B + bA*V_B) + (aB*U_A + bB*V_A)] / 2
/// (P = window sum of A*B; aX, bX the box OLS coefficients), which equals
/// the residual product sum by the normal equations and makes the whole
/// computation invariant under swapping the two profiles, addend for addend.
inline double detrended_covariance_kernel(const std::vector<double>& A,
                                          const std::vector<double>& B, std::size_t n) {
    const std::size_t N = A.size();
    const std::size_t boxes = N - n;
    const auto nd = static_cast<long double>(n);
    const long double m = nd + 1.0L;              // points per box
    const long double st = nd * m / 2.0L;         // sum of t over 0..n
    const long double d = m * m * (m * m - 1.0L) / 12.0L; // m*Stt - St^2
    const long double inv_d = 1.0L / d;
    const long double inv_m = 1.0L / m;
    const long double inv_df = 1.0L / (nd - 1.0L);

    CompensatedSumWide uA, vA, uB, vB, p;
    for (std::size_t t = 0; t <= n; ++t) {
        const long double a = A[t], b = B[t];
        uA.add(a);
        vA.add(static_cast<long double>(t) * a);
        uB.add(b);
        vB.add(static_cast<long double>(t) * b);
        p.add(a * b);
    }

    CompensatedSum mean;
    for (std::size_t s = 0;; ++s) {
        const long double ua = uA.value(), va = vA.value();
        const long double ub = uB.value(), vb = vB.value();
        const long double betaA = (m * va - st * ua) * inv_d;
        const long double alphaA = (ua - betaA * st) * inv_m;
        const long double betaB = (m * vb - st * ub) * inv_d;
        const long double alphaB = (ub - betaB * st) * inv_m;
        const long double cross =
            p.value() - ((alphaA * ub + betaA * vb) + (alphaB * ua + betaB * va)) * 0.5L;
        mean.add(static_cast<double>(cross * inv_df));

        if (s + 1 == boxes)
            break;

        const long double aOut = A[s], bOut = B[s];
        const long double aIn = A[s + n + 1], bIn = B[s + n + 1];
        vA.add((aOut - uA.value()) + nd * aIn);
        uA.add(aIn - aOut);
        vB.add((bOut - uB.value()) + nd * bIn);
        uB.add(bIn - bOut);
        p.add(aIn * bIn - aOut * bOut);
    }
    return mean.value() / static_cast<double>(boxes);
}

inline void check_scale(std::size_t n, std::size_t N) {
    if (n < 4 || n + 1 > N)
        throw InvalidParameter("scale n = " + std::to_string(n) +
                               " outside [4, N-1] for N = " + std::to_string(N));
}

} // namespace detail

/// Signed detrended covariance of two equal-length profiles at one scale.
/// With profileA == profileB this is the detrended variance of DFA.
inline double detrended_covariance_at_scale(const Profile& profileA, const Profile& profileB,
                                            std::size_t n) {
    if (profileA.size() != profileB.size())
        throw InvalidInput("profiles must have equal length");
    detail::check_scale(n, profileA.size());
    return detail::detrended_covariance_kernel(profileA.values, profileB.values, n);
}

namespace detail {

inline FluctuationCurve curve_impl(const Profile& pa, const Profile& pb, const ScaleGrid& grid,
                                   CurveKind kind) {
    const std::size_t N = pa.size();
    if (grid.scales.empty())
        throw InvalidParameter("empty scale grid");
    for (std::size_t i = 0; i < grid.scales.size(); ++i) {
        check_scale(grid.scales[i], N);
        if (i > 0 && grid.scales[i] <= grid.scales[i - 1])
            throw InvalidParameter("scale grid must be strictly increasing");
    }

    FluctuationCurve curve;
    curve.grid = grid;
    curve.kind = kind;
    curve.series_length = N;
    curve.f2.reserve(grid.size());
    curve.f_signed.reserve(grid.size());
    for (std::size_t n : grid.scales) {
        const double f2 = detrended_covariance_kernel(pa.values, pb.values, n);
        curve.f2.push_back(f2);
        curve.f_signed.push_back(std::copysign(std::sqrt(std::abs(f2)), f2));
    }
    return curve;
}

} // namespace detail

/// Detrended cross-correlation curve of two equal-length series: profiles are
/// built once, then the per-scale covariance is evaluated on every grid entry.
inline FluctuationCurve dxa_curve(const TimeSeries& seriesA, const TimeSeries& seriesB,
                                  const ScaleGrid& grid) {
    if (seriesA.size() != seriesB.size())
        throw InvalidInput("series must have equal length");
    const Profile pa = build_profile(seriesA);
    const Profile pb = build_profile(seriesB);
    return detail::curve_impl(pa, pb, grid, CurveKind::DXA);
}

/// Detrended fluctuation curve of a single series (the DXA special case with
/// both inputs identical; every f2 is then a detrended variance, >= 0).
inline FluctuationCurve dfa_curve(const TimeSeries& series, const ScaleGrid& grid) {
    const Profile p = build_profile(series);
    return detail::curve_impl(p, p, grid, CurveKind::DFA);
}

} // namespace dxa
