#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace quditrep {

inline constexpr double kLn2 = 0.6931471805599453094;
inline constexpr double kLn10 = 2.302585092994045684;

/// log of the binomial coefficient C(n, k) via log-gamma.
inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Binomial coefficient as a double (exact up to the 53-bit mantissa).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k == 0 || k == n) return 1.0;
    return std::exp(log_binomial(n, k));
}

/// 1 - prod_i (1 - f_i), accumulated in log space so that tiny rates do not
/// cancel. Inputs are rates in [0, 1]; any f_i = 1 forces the result to 1.
inline double one_minus_product_of_complements(const std::vector<double>& rates) {
    double log_prod = 0.0;
    for (double f : rates) {
        if (f >= 1.0) return 1.0;
        log_prod += std::log1p(-f);
    }
    return -std::expm1(log_prod);
}

/// x * log2(x), continuously extended with 0 at x = 0.
inline double xlog2x(double x) {
    if (x <= 0.0) return 0.0;
    return x * (std::log(x) / kLn2);
}

/// Nearest integer; exact halves round up (toward +infinity).
inline long long round_half_up(double x) {
    return static_cast<long long>(std::floor(x + 0.5));
}

/// Nearest even integer >= 2 (ties between two even numbers cannot occur;
/// odd rounding results move to the closer even neighbour, upward on ties).
inline long long nearest_even_links(double x) {
    long long n = 2 * round_half_up(x / 2.0);
    return n < 2 ? 2 : n;
}

/// Trial-division primality test; adequate for the dimensions used here.
inline bool is_prime(long long n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (long long p = 3; p * p <= n; p += 2) {
        if (n % p == 0) return false;
    }
    return true;
}

/// FNV-1a 64-bit hash, used to fingerprint canonical configuration text.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace quditrep
