#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dxa {
namespace detail {

/// Neumaier-compensated accumulator. Keeps the running error of a long
/// sum in a second term, so accumulation error stays at a few ulp of
/// the largest term instead of growing with the number of terms.
template <typename Real>
class BasicCompensatedSum {
  public:
    BasicCompensatedSum() = default;
    explicit BasicCompensatedSum(Real init) : sum_(init) {}

    void add(Real x) {
        const Real t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    Real value() const { return sum_ + comp_; }

  private:
    Real sum_ = 0.0;
    Real comp_ = 0.0;
};

using CompensatedSum = BasicCompensatedSum<double>;
/// Wide variant for rolling sums whose cancellation floor would otherwise
/// show up at double precision.
using CompensatedSumWide = BasicCompensatedSum<long double>;

/// Compensated sum of a whole range.
inline double compensated_sum(const std::vector<double>& xs) {
    CompensatedSum acc;
    for (double x : xs)
        acc.add(x);
    return acc.value();
}

/// SplitMix64 output function. Used to derive secondary seeds (independent
/// noise streams, per-realization seeds) from one primary seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for stream index `stream` derived from `seed`. Stream 0 is the
/// primary stream itself.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return stream == 0 ? seed : splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL);
}

} // namespace detail
} // namespace dxa
