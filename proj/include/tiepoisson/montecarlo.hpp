#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tiepoisson/distributions.hpp"
#include "tiepoisson/error.hpp"
#include "tiepoisson/exact_oracle.hpp"
#include "tiepoisson/law.hpp"
#include "tiepoisson/rng.hpp"
#include "tiepoisson/sampling.hpp"

namespace tiepoisson {

enum class statistic_kind { W, Y, Z };

struct statistic_spec {
    statistic_kind kind = statistic_kind::W;
    std::int64_t r = 2;  // Y
    std::int64_t A = 2;  // Z
    std::int64_t B = 2;

    static statistic_spec pair_ties() { return {statistic_kind::W, 2, 2, 2}; }
    static statistic_spec strict_ties(std::int64_t r) { return {statistic_kind::Y, r, 2, 2}; }
    static statistic_spec strict_tie_vector(std::int64_t A, std::int64_t B) { return {statistic_kind::Z, 2, A, B}; }

    occupancy_statistic occupancy() const {
        switch (kind) {
            case statistic_kind::W:
                return occupancy_statistic::pair_ties();
            case statistic_kind::Y:
                return occupancy_statistic::strict_ties(r);
            case statistic_kind::Z:
                return occupancy_statistic::strict_tie_vector(A, B);
        }
        return occupancy_statistic::pair_ties();
    }
};

struct SimConfig {
    Instance instance;
    statistic_spec statistic;
    std::uint64_t replications = 1;
    std::uint64_t seed = 0;
    unsigned stream_count = 1;
};

/**
 * Empirical law of a simulated statistic. For vector statistics the scalar
 * summaries refer to the coordinate sum; coordinate_means holds each Y_a.
 */
struct SimResult {
    Law empirical_law;
    std::map<outcome, std::uint64_t> counts;
    std::uint64_t replications = 0;
    double statistic_mean = 0.0;
    double statistic_variance = 0.0;
    double std_error_mean = 0.0;
    std::vector<double> coordinate_means;
    std::vector<double> coordinate_std_errors;
};

namespace detail {

inline void check_sim_config(const SimConfig& cfg) {
    require(cfg.replications >= 1, "simulate: replications must be >= 1");
    require(cfg.stream_count >= 1, "simulate: stream_count must be >= 1");
    const auto n = cfg.instance.n;
    switch (cfg.statistic.kind) {
        case statistic_kind::W:
            break;
        case statistic_kind::Y:
            require_domain(cfg.statistic.r >= 2 && cfg.statistic.r <= n, "simulate: requires 2 <= r <= n");
            break;
        case statistic_kind::Z:
            require_domain(cfg.statistic.A >= 2 && cfg.statistic.A <= cfg.statistic.B && cfg.statistic.B <= n,
                           "simulate: requires 2 <= A <= B <= n");
            break;
    }
}

inline SimResult summarize(std::map<outcome, std::uint64_t> counts, std::uint64_t reps, std::size_t dim) {
    SimResult res;
    res.replications = reps;
    res.empirical_law = Law(dim);
    const double total = static_cast<double>(reps);
    for (const auto& [o, c] : counts) res.empirical_law.support[o] = static_cast<double>(c) / total;
    res.coordinate_means.assign(dim, 0.0);
    res.coordinate_std_errors.assign(dim, 0.0);
    std::vector<double> second(dim, 0.0);
    double s1 = 0.0, s2 = 0.0;
    for (const auto& [o, c] : counts) {
        const double w = static_cast<double>(c);
        double sum = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double v = static_cast<double>(o[k]);
            res.coordinate_means[k] += w * v;
            second[k] += w * v * v;
            sum += v;
        }
        s1 += w * sum;
        s2 += w * sum * sum;
    }
    const double denom = reps > 1 ? total - 1.0 : 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double mean = res.coordinate_means[k] / total;
        const double var = std::max(0.0, (second[k] - total * mean * mean) / denom);
        res.coordinate_means[k] = mean;
        res.coordinate_std_errors[k] = std::sqrt(var / total);
    }
    res.statistic_mean = s1 / total;
    res.statistic_variance = std::max(0.0, (s2 - total * res.statistic_mean * res.statistic_mean) / denom);
    res.std_error_mean = std::sqrt(res.statistic_variance / total);
    res.counts = std::move(counts);
    return res;
}

}  // namespace detail

/// Simulates the configured statistic. Replication i draws from its own
/// stream keyed by (seed, i), so the result is identical for any stream_count.
inline SimResult run(const SimConfig& cfg) {
    detail::check_sim_config(cfg);
    const auto stat = cfg.statistic.occupancy();
    const score_sampler sampler(cfg.instance.pmf);
    const auto n = static_cast<std::size_t>(cfg.instance.n);
    const auto streams = static_cast<std::uint64_t>(std::min<std::uint64_t>(cfg.stream_count, cfg.replications));

    auto work = [&](std::uint64_t begin, std::uint64_t end, std::map<outcome, std::uint64_t>& tally) {
        std::vector<std::int64_t> scores(n);
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            counter_rng rng(cfg.seed, rep);
            for (auto& s : scores) s = sampler(rng);
            outcome o(stat.dimension, 0);
            for (auto c : occupancy_counts(scores)) stat.accumulate(c, o);
            ++tally[o];
        }
    };

    std::vector<std::map<outcome, std::uint64_t>> partial(streams);
    if (streams == 1) {
        work(0, cfg.replications, partial[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (cfg.replications + streams - 1) / streams;
        for (std::uint64_t s = 0; s < streams; ++s) {
            const std::uint64_t begin = std::min(cfg.replications, s * chunk);
            const std::uint64_t end = std::min(cfg.replications, begin + chunk);
            pool.emplace_back(work, begin, end, std::ref(partial[s]));
        }
        for (auto& t : pool) t.join();
    }
    std::map<outcome, std::uint64_t> merged;
    for (const auto& part : partial)
        for (const auto& [o, c] : part) merged[o] += c;
    return detail::summarize(std::move(merged), cfg.replications, stat.dimension);
}

struct empirical_tv_result {
    double estimate;
    double std_error;
};

/**
 * Plug-in TV between the empirical law and `reference`, with a bootstrap
 * standard error. The plug-in estimate is biased upward by roughly
 * sqrt(support / replications).
 */
inline empirical_tv_result empirical_tv(const SimResult& result, const Law& reference, int resamples = 200,
                                        std::uint64_t seed = 0x5EEDB007ULL) {
    require_domain(result.empirical_law.dimension == reference.dimension, "empirical_tv: outcome dimension mismatch");
    require(resamples >= 0, "empirical_tv: resamples must be non-negative");
    const double estimate = exact_tv(result.empirical_law, reference).value;
    if (resamples < 2) return {estimate, 0.0};

    std::vector<outcome> keys;
    std::vector<double> probs;
    for (const auto& [o, c] : result.counts) {
        keys.push_back(o);
        probs.push_back(static_cast<double>(c) / static_cast<double>(result.replications));
    }
    double s1 = 0.0, s2 = 0.0;
    for (int b = 0; b < resamples; ++b) {
        counter_rng rng(seed, static_cast<std::uint64_t>(b));
        Law boot(result.empirical_law.dimension);
        std::uint64_t left = result.replications;
        double mass_left = 1.0;
        // multinomial resample as a chain of conditional binomials
        for (std::size_t k = 0; k < keys.size() && left > 0; ++k) {
            std::uint64_t draw = left;
            if (k + 1 < keys.size()) {
                const double q = std::clamp(probs[k] / mass_left, 0.0, 1.0);
                std::binomial_distribution<std::uint64_t> bin(left, q);
                draw = bin(rng);
            }
            mass_left -= probs[k];
            left -= draw;
            if (draw > 0) boot.support[keys[k]] = static_cast<double>(draw) / static_cast<double>(result.replications);
        }
        const double tv = exact_tv(boot, reference).value;
        s1 += tv;
        s2 += tv * tv;
    }
    const double mean = s1 / resamples;
    const double var = std::max(0.0, (s2 - resamples * mean * mean) / (resamples - 1));
    return {estimate, std::sqrt(var)};
}

}  // namespace tiepoisson
