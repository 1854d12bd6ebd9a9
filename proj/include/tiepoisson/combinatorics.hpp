#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tiepoisson/error.hpp"

namespace tiepoisson {

using big_int = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k); zero when k > n.
inline big_int binomial_exact(std::int64_t n, std::int64_t k) {
    require(n >= 0 && k >= 0, "binomial_exact: negative argument");
    if (k > n) return 0;
    k = std::min(k, n - k);
    big_int c = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        c *= n - k + i;
        c /= i;  // exact: c now holds C(n-k+i, i)
    }
    return c;
}

/// C(n, k) as a double. Computed exactly, rounded once; +inf past DBL_MAX.
inline double binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0.0;
    const big_int c = binomial_exact(n, k);
    if (boost::multiprecision::msb(c) >= 1023) return std::numeric_limits<double>::infinity();
    return c.convert_to<double>();
}

/// log C(n, k); exact route while the coefficient is representable.
inline double log_binomial(std::int64_t n, std::int64_t k) {
    require(k >= 0 && k <= n, "log_binomial: k out of range");
    const big_int c = binomial_exact(n, k);
    if (boost::multiprecision::msb(c) < 1000) return std::log(c.convert_to<double>());
    const std::size_t shift = boost::multiprecision::msb(c) - 60;
    const big_int top = c >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

/// Pascal triangle rows 0..n as doubles (exact while entries stay below 2^53).
inline std::vector<std::vector<double>> pascal_rows(int n) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        auto& row = rows[static_cast<std::size_t>(m)];
        row.assign(static_cast<std::size_t>(m) + 1, 1.0);
        for (int k = 1; k < m; ++k) {
            row[static_cast<std::size_t>(k)] =
                rows[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(k - 1)] +
                rows[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(k)];
        }
    }
    return rows;
}

/// All k-subsets of {0..n-1} in lexicographic order, each as a bitmask.
inline std::vector<std::uint64_t> subsets_of_size(int n, int k) {
    require(n >= 0 && n <= 63 && k >= 0 && k <= n, "subsets_of_size: unsupported size");
    std::vector<std::uint64_t> out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::uint64_t mask = 0;
        for (int i : idx) mask |= std::uint64_t{1} << i;
        out.push_back(mask);
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
    return out;
}

}  // namespace tiepoisson
