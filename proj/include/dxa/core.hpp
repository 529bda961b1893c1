#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dxa/errors.hpp"
#include "dxa/numeric.hpp"

namespace dxa {

/// A finite ordered sequence of real samples. Construction validates the
/// class invariants: at least one sample, every sample finite.
class TimeSeries {
  public:
    explicit TimeSeries(std::vector<double> samples, std::string label = {})
        : samples_(std::move(samples)), label_(std::move(label)) {
        if (samples_.empty())
            throw InvalidInput("time series must contain at least one sample");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!std::isfinite(samples_[i]))
                throw InvalidInput("non-finite sample at index " + std::to_string(i));
        }
    }

    const std::vector<double>& samples() const { return samples_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }

  private:
    std::vector<double> samples_;
    std::string label_;
};

/// Integrated walk R_k of a series: the object the fluctuation analysis
/// detrends. values[k-1] = y_1 + ... + y_k.
struct Profile {
    std::vector<double> values;
    std::size_t source_length = 0;

    std::size_t size() const { return values.size(); }
};

struct StationaryMoments {
    double mean = 0.0;
    double variance = 0.0; // biased (1/N) estimator
};

inline StationaryMoments moments(const TimeSeries& series) {
    const auto& y = series.samples();
    detail::CompensatedSum s;
    for (double v : y)
        s.add(v);
    const double mu = s.value() / static_cast<double>(y.size());
    detail::CompensatedSum q;
    for (double v : y)
        q.add((v - mu) * (v - mu));
    return {mu, q.value() / static_cast<double>(y.size())};
}

/// Cumulative sums R_k = y_1 + ... + y_k. Compensated accumulation: for long
/// heavy-tailed inputs the plain running sum loses digits the detrended
/// covariance would inherit.
inline Profile build_profile(const TimeSeries& series) {
    const auto& y = series.samples();
    Profile p;
    p.values.reserve(y.size());
    p.source_length = y.size();
    detail::CompensatedSum acc;
    for (double v : y) {
        acc.add(v);
        p.values.push_back(acc.value());
    }
    return p;
}

/// Centered walk I(n) = sum_{i<=n} (y_i - mean). The final value telescopes
/// to zero up to accumulation rounding.
inline Profile integrated_profile(const TimeSeries& series) {
    const auto& y = series.samples();
    const double mu = moments(series).mean;
    Profile p;
    p.values.reserve(y.size());
    p.source_length = y.size();
    detail::CompensatedSum acc;
    for (double v : y) {
        acc.add(v - mu);
        p.values.push_back(acc.value());
    }
    return p;
}

/// Successive differences y_i - y_{i-1}; output is one sample shorter.
inline TimeSeries diff(const TimeSeries& series) {
    const auto& y = series.samples();
    if (y.size() < 2)
        throw InvalidInput("diff requires at least 2 samples");
    std::vector<double> out(y.size() - 1);
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i - 1] = y[i] - y[i - 1];
    return TimeSeries(std::move(out), series.label());
}

/// Differences of natural logarithms; every sample must be positive.
inline TimeSeries log_diff(const TimeSeries& series) {
    const auto& y = series.samples();
    if (y.size() < 2)
        throw InvalidInput("log_diff requires at least 2 samples");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0))
            throw InvalidInput("log_diff requires positive samples, found " +
                               std::to_string(y[i]) + " at index " + std::to_string(i));
    }
    std::vector<double> out(y.size() - 1);
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i - 1] = std::log(y[i]) - std::log(y[i - 1]);
    return TimeSeries(std::move(out), series.label());
}

/// Elementwise absolute value (magnitude series).
inline TimeSeries abs_values(const TimeSeries& series) {
    std::vector<double> out(series.samples());
    for (double& v : out)
        v = std::abs(v);
    return TimeSeries(std::move(out), series.label());
}

} // namespace dxa
