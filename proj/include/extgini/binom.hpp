#pragma once

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "extgini/errors.hpp"

namespace extgini {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k) in arbitrary precision. The
/// multiplicative recurrence divides exactly at every step.
inline BigInt binomial_exact(long long n, long long k) {
    if (n < 0 || k < 0) {
        throw invalid_input("binomial_exact: arguments must be non-negative");
    }
    if (k > n) {
        return 0;
    }
    if (k > n - k) {
        k = n - k;
    }
    BigInt result = 1;
    for (long long i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

/// log C(n, k) through lgamma; used where exact weights would overflow any
/// fixed-width budget and only the ratio to C(n, m) is needed.
inline double log_binomial(long long n, long long k) {
    if (n < 0 || k < 0 || k > n) {
        throw invalid_input("log_binomial: need 0 <= k <= n");
    }
    if (k == 0 || k == n) {
        return 0.0;
    }
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace extgini
