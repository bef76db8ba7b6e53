#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "propgen/errors.hpp"

namespace propgen {

// Formula-space cardinalities grow double-exponentially in the depth
// (the up-to-depth count satisfies count(n) >= count(n-1)^k), so every
// count and every sampling weight is arbitrary precision.
using BigCount = boost::multiprecision::cpp_int;

inline BigCount pow_count(const BigCount& base, int exponent) {
    if (exponent < 0)
        throw config_error("pow_count: negative exponent");
    return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

/// Exact binomial coefficient; 0 when k is out of range.
inline BigCount binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    BigCount result = 1;
    for (int j = 1; j <= k; ++j) {
        result *= n - k + j;
        result /= j; // exact: j consecutive integers contain a multiple of j
    }
    return result;
}

} // namespace propgen
