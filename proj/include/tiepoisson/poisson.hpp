#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tiepoisson/error.hpp"
#include "tiepoisson/exact_oracle.hpp"
#include "tiepoisson/law.hpp"

namespace tiepoisson {

struct PoissonSpec {
    std::vector<double> means;
    double truncation_tolerance = 1e-12;
};

namespace detail {

inline void check_poisson_spec(const PoissonSpec& spec) {
    require(!spec.means.empty(), "poisson: at least one mean required");
    require(spec.truncation_tolerance > 0.0, "poisson: truncation tolerance must be positive");
    for (double m : spec.means) {
        require(std::isfinite(m) && m >= 0.0, "poisson: means must be finite and non-negative");
        // e^{-lambda} starts the recurrence and must stay a normal double
        require(m <= 700.0, "poisson: mean above 700 not supported");
    }
}

// pmf values 0..K with K the first index whose upper tail 1 - sum <= tol
inline std::vector<double> truncated_poisson_masses(double lambda, double tol, double& tail) {
    std::vector<double> masses;
    if (lambda == 0.0) {
        tail = 0.0;
        return {1.0};
    }
    double pk = std::exp(-lambda);
    double acc = 0.0;
    for (std::int64_t k = 0;; ++k) {
        masses.push_back(pk);
        acc += pk;
        tail = std::max(0.0, 1.0 - acc);
        // past the mode the terms shrink; stop once the tail is small or no
        // longer resolvable in double precision
        if (tail <= tol || (static_cast<double>(k) > lambda && pk < 1e-300)) break;
        pk *= lambda / static_cast<double>(k + 1);
    }
    return masses;
}

}  // namespace detail

/// Po(lambda) truncated at the smallest K with upper tail <= tolerance.
inline Law poisson_law(const PoissonSpec& spec) {
    detail::check_poisson_spec(spec);
    require(spec.means.size() == 1, "poisson_law: univariate spec required");
    double tail = 0.0;
    const auto masses = detail::truncated_poisson_masses(spec.means[0], spec.truncation_tolerance, tail);
    Law law(1);
    for (std::size_t k = 0; k < masses.size(); ++k) law.support[{static_cast<std::int64_t>(k)}] = masses[k];
    law.tail_error = tail;
    return law;
}

inline Law poisson_law(double lambda, double tolerance = 1e-12) { return poisson_law(PoissonSpec{{lambda}, tolerance}); }

/// Product of independent Po(lambda_a), each coordinate truncated separately.
inline Law product_poisson_law(const PoissonSpec& spec, std::uint64_t budget = default_enumeration_budget) {
    detail::check_poisson_spec(spec);
    std::vector<std::vector<double>> coords;
    double states = 1.0;
    double keep = 1.0;
    for (double m : spec.means) {
        double tail = 0.0;
        coords.push_back(detail::truncated_poisson_masses(m, spec.truncation_tolerance, tail));
        states *= static_cast<double>(coords.back().size());
        keep *= 1.0 - tail;
    }
    detail::check_budget(states, budget, "product Poisson law");
    Law law(coords.size());
    outcome o(coords.size(), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t a, double w) {
        if (a == coords.size()) {
            law.support[o] = w;
            return;
        }
        for (std::size_t k = 0; k < coords[a].size(); ++k) {
            o[a] = static_cast<std::int64_t>(k);
            rec(a + 1, w * coords[a][k]);
        }
    };
    rec(0, 1.0);
    law.tail_error = 1.0 - keep;
    return law;
}

}  // namespace tiepoisson
