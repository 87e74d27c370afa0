#pragma once

#include <cstdint>
#include <vector>

namespace franson::math {

inline constexpr double kPi = 3.14159265358979323846;

/// Error function with absolute error below 1e-15 on the whole real line.
///
/// Uses the all-positive series
///   erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (1*3*...*(2n+1))
/// which has no cancellation, and saturates to +/-1 for |x| > 6 where
/// erfc(6) ~ 2e-17 is below double resolution.
double erf(double x);

/// Evenly spaced grid of `count` points from `first` to `last` inclusive.
std::vector<double> linspace(double first, double last, std::size_t count);

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic child seed for a named sub-stream of a run.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
}

}  // namespace franson::math
