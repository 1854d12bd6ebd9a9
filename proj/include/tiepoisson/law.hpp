#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tiepoisson/error.hpp"

namespace tiepoisson {

/// Integer outcome; scalar statistics use length-1 vectors.
using outcome = std::vector<std::int64_t>;

/**
 * Probability law over integer outcomes (or integer vectors of a fixed
 * dimension). `tail_error` is the mass the law does not account for:
 * truncated Poisson tails, geometric support cut at x_max, etc. Masses plus
 * tail_error sum to 1.
 */
struct Law {
    std::size_t dimension = 1;
    std::map<outcome, double> support;
    double tail_error = 0.0;

    Law() = default;
    explicit Law(std::size_t dim) : dimension(dim) {}

    void add(const outcome& o, double m) {
        require(o.size() == dimension, "law: outcome dimension mismatch");
        support[o] += m;
    }

    double mass(const outcome& o) const {
        auto it = support.find(o);
        return it == support.end() ? 0.0 : it->second;
    }
    double mass(std::int64_t k) const { return mass(outcome{k}); }

    double total_mass() const {
        double s = 0.0;
        for (const auto& [o, m] : support) s += m;
        return s;
    }

    /// Mean of one coordinate over the accounted mass.
    double mean(std::size_t coord = 0) const {
        require(coord < dimension, "law: coordinate out of range");
        double s = 0.0;
        for (const auto& [o, m] : support) s += m * static_cast<double>(o[coord]);
        return s;
    }

    double variance(std::size_t coord = 0) const {
        const double mu = mean(coord);
        double s = 0.0;
        for (const auto& [o, m] : support) {
            const double d = static_cast<double>(o[coord]) - mu;
            s += m * d * d;
        }
        return s;
    }

    Law marginal(std::size_t coord) const {
        require(coord < dimension, "law: coordinate out of range");
        Law out(1);
        for (const auto& [o, m] : support) out.support[{o[coord]}] += m;
        out.tail_error = tail_error;
        return out;
    }
};

inline Law point_mass(const outcome& o) {
    Law law(o.size());
    law.support[o] = 1.0;
    return law;
}

/// Total variation distance with the uncertainty the two tails leave open:
/// the true distance lies in [lower, upper].
struct tv_estimate {
    double value;
    double lower;
    double upper;
};

inline tv_estimate exact_tv(const Law& a, const Law& b) {
    require_domain(a.dimension == b.dimension, "exact_tv: laws have different outcome dimensions");
    double l1 = 0.0;
    auto ia = a.support.begin();
    auto ib = b.support.begin();
    while (ia != a.support.end() || ib != b.support.end()) {
        if (ib == b.support.end() || (ia != a.support.end() && ia->first < ib->first)) {
            l1 += std::abs(ia->second);
            ++ia;
        } else if (ia == a.support.end() || ib->first < ia->first) {
            l1 += std::abs(ib->second);
            ++ib;
        } else {
            l1 += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    const double value = 0.5 * l1;
    const double slack = 0.5 * (a.tail_error + b.tail_error);
    return {value, std::max(0.0, value - slack), std::min(1.0, value + slack)};
}

}  // namespace tiepoisson
