#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dxa/core.hpp"
#include "dxa/errors.hpp"
#include "dxa/numeric.hpp"

namespace dxa {

/// Parameters of the fractional long-memory generator
///   y_i = sum_{j=1}^{W} a_j(rho) y_{i-j} + eta_i,   eta_i ~ N(0,1) i.i.d.
/// The memory parameter rho in (0, 0.5) sets the Hurst exponent of the
/// output, H = 0.5 + rho.
struct ArfimaSpec {
    double rho = 0.1;
    std::size_t length = 0;
    /// Number of lagged terms kept in the (formally infinite) weighted sum.
    std::size_t truncation = 10000;
    std::uint64_t seed = 42;
    /// Samples generated and discarded before the output window. Defaults to
    /// the truncation window so the recursion has a full history.
    std::optional<std::size_t> burn_in{};

    std::size_t effective_burn_in() const { return burn_in.value_or(truncation); }
};

enum class CouplingMode { Same, Negated, Independent };

inline const char* to_string(CouplingMode m) {
    switch (m) {
        case CouplingMode::Same: return "same";
        case CouplingMode::Negated: return "negated";
        case CouplingMode::Independent: return "independent";
    }
    return "?";
}

inline void validate(const ArfimaSpec& spec) {
    if (!(spec.rho > 0.0 && spec.rho < 0.5))
        throw InvalidParameter("rho out of (0, 0.5): " + std::to_string(spec.rho));
    if (spec.length < 1)
        throw InvalidParameter("length must be >= 1");
}

/// AR(infinity) weights a_1..a_count for memory parameter rho, in the
/// positive-sign convention a_1 = rho. Computed by the ratio recurrence
///   a_{j+1} = a_j * (j - rho) / (j + 1),
/// which is overflow-free; all weights are positive, strictly decreasing,
/// and sum to 1 over the infinite tail.
inline std::vector<double> arfima_weights(double rho, std::size_t count) {
    if (!(rho > 0.0 && rho < 0.5))
        throw InvalidParameter("rho out of (0, 0.5): " + std::to_string(rho));
    if (count < 1)
        throw InvalidParameter("weight count must be >= 1");
    std::vector<double> w(count);
    w[0] = rho;
    for (std::size_t j = 1; j < count; ++j) {
        const double dj = static_cast<double>(j);
        const double ratio = (dj - rho) / (dj + 1.0);
        w[j] = w[j - 1] * ratio;
    }
    return w;
}

/// Standard Gaussian i.i.d. draws. The stream is mt19937_64 (seeded with
/// `seed`) feeding the Marsaglia polar method; identical (seed, count) gives
/// identical output within one build of this library.
inline std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        // 53 random bits mapped to [0, 1)
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    std::vector<double> out;
    out.reserve(count);
    while (out.size() < count) {
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        out.push_back(u * f);
        if (out.size() < count)
            out.push_back(v * f);
    }
    return out;
}

namespace detail {

/// Core recursion. `noise` must hold burn + length values; the first burn
/// outputs are discarded.
inline std::vector<double> arfima_recursion(double rho, std::size_t length,
                                            std::size_t truncation, std::size_t burn,
                                            std::span<const double> noise) {
    const std::size_t total = burn + length;
    if (noise.size() < total)
        throw InvalidInput("noise too short: need " + std::to_string(total) +
                           " values, got " + std::to_string(noise.size()));

    // Weights stored reversed so the lag sum is a forward contiguous dot
    // product over the most recent window of y.
    std::vector<double> wrev;
    if (truncation > 0) {
        wrev = arfima_weights(rho, truncation);
        std::reverse(wrev.begin(), wrev.end());
    }
    const std::size_t W = truncation;

    std::vector<double> y(total);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t lags = std::min(i, W);
        double acc = 0.0;
        if (lags > 0) {
            const double* yp = y.data() + (i - lags);
            const double* wp = wrev.data() + (W - lags);
            for (std::size_t t = 0; t < lags; ++t)
                acc += wp[t] * yp[t];
        }
        y[i] = acc + noise[i];
    }
    y.erase(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(burn));
    return y;
}

inline std::string arfima_label(double rho) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "arfima_rho%g", rho);
    return buf;
}

} // namespace detail

/// Generate from an explicit noise sequence, which must supply at least
/// length + burn_in values. Deterministic in its inputs.
inline TimeSeries arfima_generate(const ArfimaSpec& spec, std::span<const double> noise) {
    validate(spec);
    auto y = detail::arfima_recursion(spec.rho, spec.length, spec.truncation,
                                      spec.effective_burn_in(), noise);
    return TimeSeries(std::move(y), detail::arfima_label(spec.rho));
}

/// Generate with noise drawn from the spec's seed.
inline TimeSeries arfima_generate(const ArfimaSpec& spec) {
    validate(spec);
    const auto noise = gaussian_noise(spec.seed, spec.effective_burn_in() + spec.length);
    return arfima_generate(spec, noise);
}

/// Generate a coupled pair. All randomness derives from specA.seed:
///   Same        - both recursions consume the identical noise stream,
///   Negated     - the second consumes the elementwise negation,
///   Independent - the second consumes a fresh stream seeded with
///                 derive_seed(specA.seed, 1), so one seed reproduces the
///                 whole experiment.
/// When the burn-in windows differ the shared stream is aligned at its end,
/// so output sample i of both members sees the same (or negated) eta_i.
inline std::pair<TimeSeries, TimeSeries> generate_pair(const ArfimaSpec& specA,
                                                       const ArfimaSpec& specB,
                                                       CouplingMode mode) {
    validate(specA);
    validate(specB);
    if (specA.length != specB.length)
        throw InvalidInput("pair members must have equal length");

    const std::size_t n = specA.length;
    const std::size_t burnA = specA.effective_burn_in();
    const std::size_t burnB = specB.effective_burn_in();
    const std::size_t burnMax = std::max(burnA, burnB);

    const auto noise = gaussian_noise(specA.seed, burnMax + n);
    const auto tail = [&](std::size_t burn) {
        return std::span<const double>(noise).subspan(burnMax - burn);
    };

    auto ya = detail::arfima_recursion(specA.rho, n, specA.truncation, burnA, tail(burnA));
    std::vector<double> yb;
    std::string labelB = detail::arfima_label(specB.rho);
    switch (mode) {
        case CouplingMode::Same:
            yb = detail::arfima_recursion(specB.rho, n, specB.truncation, burnB, tail(burnB));
            break;
        case CouplingMode::Negated: {
            std::vector<double> neg(noise.size());
            for (std::size_t i = 0; i < noise.size(); ++i)
                neg[i] = -noise[i];
            auto span = std::span<const double>(neg).subspan(burnMax - burnB);
            yb = detail::arfima_recursion(specB.rho, n, specB.truncation, burnB, span);
            labelB += "_negated";
            break;
        }
        case CouplingMode::Independent: {
            const auto noiseB = gaussian_noise(detail::derive_seed(specA.seed, 1), burnB + n);
            yb = detail::arfima_recursion(specB.rho, n, specB.truncation, burnB, noiseB);
            break;
        }
    }
    return {TimeSeries(std::move(ya), detail::arfima_label(specA.rho)),
            TimeSeries(std::move(yb), std::move(labelB))};
}

} // namespace dxa
