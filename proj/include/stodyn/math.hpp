#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace stodyn::math {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Standard normal density.
double normal_pdf(double z);

// Standard normal CDF, accurate in both tails (erfc based).
double normal_cdf(double z);

// Inverse standard normal CDF (Wichura's AS 241, double precision).
// Requires 0 < p < 1.
double normal_quantile(double p);

// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9, int max_depth = 40);

// Numerically careful sum (pairwise reduction, order-stable).
double pairwise_sum(const std::vector<double>& v);

// SplitMix64 step; used to derive independent per-item seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic seed for item `index` of a stream with the given root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

}  // namespace stodyn::math
