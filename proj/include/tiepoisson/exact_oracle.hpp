#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tiepoisson/combinatorics.hpp"
#include "tiepoisson/distributions.hpp"
#include "tiepoisson/error.hpp"
#include "tiepoisson/law.hpp"

namespace tiepoisson {

inline constexpr std::uint64_t default_enumeration_budget = 10'000'000;

enum class enumeration_route {
    automatic,    // partition for uniform pmfs, box_dp otherwise
    box_dp,       // boxes folded in one at a time, compositions aggregated by outcome
    composition,  // every occupancy vector (c_1..c_S) listed with its multinomial weight
    partition,    // uniform only: multisets of counts, exact integer weights
};

struct exact_options {
    std::uint64_t budget = default_enumeration_budget;
    enumeration_route route = enumeration_route::automatic;
};

/**
 * Statistic that is a sum over boxes of a per-box contribution depending only
 * on the box count. W, Y_r and (Y_A..Y_B) all have this form.
 */
struct occupancy_statistic {
    std::size_t dimension;
    std::function<void(std::int64_t count, outcome& acc)> accumulate;

    static occupancy_statistic pair_ties() {
        return {1, [](std::int64_t c, outcome& acc) { acc[0] += c * (c - 1) / 2; }};
    }
    static occupancy_statistic strict_ties(std::int64_t r) {
        return {1, [r](std::int64_t c, outcome& acc) { acc[0] += (c == r) ? 1 : 0; }};
    }
    static occupancy_statistic strict_tie_vector(std::int64_t lo, std::int64_t hi) {
        return {static_cast<std::size_t>(hi - lo + 1), [lo, hi](std::int64_t c, outcome& acc) {
                    if (c >= lo && c <= hi) acc[static_cast<std::size_t>(c - lo)] += 1;
                }};
    }
};

namespace detail {

inline void check_budget(double needed, std::uint64_t budget, const std::string& what) {
    if (needed > static_cast<double>(budget))
        throw resource_error(what + " needs about " + std::to_string(static_cast<long double>(needed)) +
                             " states, over the enumeration budget of " + std::to_string(budget));
}

inline void check_support_finite(const DiscretePMF& pmf) {
    require(pmf.effective_size() >= 1, "exact enumeration: empty support");
}

// Mass lost to geometric truncation across n independent balls.
inline double joint_omitted_mass(const Instance& inst) {
    const double q = inst.pmf.omitted_mass();
    if (q <= 0.0) return 0.0;
    return -std::expm1(static_cast<double>(inst.n) * std::log1p(-q));
}

inline Law law_by_box_dp(const Instance& inst, const occupancy_statistic& stat, std::uint64_t budget) {
    const auto pts = inst.pmf.effective_support();
    const int n = static_cast<int>(inst.n);
    const auto choose = pascal_rows(n);
    using key = std::pair<int, outcome>;
    std::map<key, double> states;
    states[{0, outcome(stat.dimension, 0)}] = 1.0;
    double work = 0.0;
    std::vector<double> powers(static_cast<std::size_t>(n) + 1);
    for (std::size_t b = 0; b < pts.size(); ++b) {
        const double q = pts[b].mass;
        powers[0] = 1.0;
        for (int c = 1; c <= n; ++c) powers[static_cast<std::size_t>(c)] = powers[static_cast<std::size_t>(c - 1)] * q;
        const bool last = b + 1 == pts.size();
        std::map<key, double> next;
        for (const auto& [k, w] : states) {
            const int used = k.first;
            const int left = n - used;
            // the last box must absorb every remaining ball
            for (int c = last ? left : 0; c <= left; ++c) {
                work += 1.0;
                const double wc = w * choose[static_cast<std::size_t>(left)][static_cast<std::size_t>(c)] *
                                  powers[static_cast<std::size_t>(c)];
                if (wc == 0.0) continue;
                outcome o = k.second;
                stat.accumulate(c, o);
                next[{used + c, std::move(o)}] += wc;
            }
        }
        check_budget(work, budget, "box-by-box enumeration");
        states = std::move(next);
    }
    Law law(stat.dimension);
    for (const auto& [k, w] : states)
        if (k.first == n) law.support[k.second] += w;
    return law;
}

}  // namespace detail

/// Calls f(counts, weight) for every composition (c_1..c_S) of n over the
/// effective support, weight = n!/prod c_i! * prod p_i^{c_i}.
inline void for_each_composition(const DiscretePMF& pmf, std::int64_t n,
                                 const std::function<void(std::span<const std::int64_t>, double)>& f,
                                 std::uint64_t budget = default_enumeration_budget) {
    detail::check_support_finite(pmf);
    const auto pts = pmf.effective_support();
    const auto S = static_cast<std::int64_t>(pts.size());
    detail::check_budget(binomial(n + S - 1, S - 1), budget, "composition enumeration");
    const auto choose = pascal_rows(static_cast<int>(n));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(S), 0);
    std::function<void(std::size_t, std::int64_t, double)> rec = [&](std::size_t box, std::int64_t left, double w) {
        if (box + 1 == counts.size()) {
            counts[box] = left;
            f(counts, w * std::pow(pts[box].mass, static_cast<double>(left)));
            return;
        }
        for (std::int64_t c = 0; c <= left; ++c) {
            counts[box] = c;
            rec(box + 1, left - c,
                w * choose[static_cast<std::size_t>(left)][static_cast<std::size_t>(c)] *
                    std::pow(pts[box].mass, static_cast<double>(c)));
        }
    };
    rec(0, n, 1.0);
}

/// Calls f(parts, count) for each partition of n into at most N parts
/// (parts non-increasing), with `count` the exact number of the N^n
/// assignments whose occupancy multiset equals the partition.
inline void for_each_uniform_partition(std::int64_t N, std::int64_t n,
                                       const std::function<void(std::span<const std::int64_t>, const big_int&)>& f,
                                       std::uint64_t budget = default_enumeration_budget) {
    // partitions of n into parts of size <= n, at most N parts: count first
    {
        const auto cap = static_cast<std::size_t>(std::min(N, n));
        std::vector<std::vector<double>> p(static_cast<std::size_t>(n) + 1, std::vector<double>(cap + 1, 0.0));
        // p[m][k] = partitions of m into exactly k parts
        p[0][0] = 1.0;
        for (std::size_t m = 1; m <= static_cast<std::size_t>(n); ++m)
            for (std::size_t k = 1; k <= std::min(cap, m); ++k) p[m][k] = p[m - 1][k - 1] + p[m - k][k];
        double total = 0.0;
        for (std::size_t k = 0; k <= cap; ++k) total += p[static_cast<std::size_t>(n)][k];
        detail::check_budget(total, budget, "partition enumeration");
    }
    big_int n_fact = 1;
    for (std::int64_t i = 2; i <= n; ++i) n_fact *= i;
    std::vector<std::int64_t> parts;
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t left, std::int64_t max_part) {
        if (left == 0) {
            const auto k = static_cast<std::int64_t>(parts.size());
            // distinct boxes: N (N-1) ... (N-k+1) / prod(multiplicity!)
            big_int boxes = 1;
            for (std::int64_t i = 0; i < k; ++i) boxes *= N - i;
            big_int denom = 1;
            std::size_t i = 0;
            while (i < parts.size()) {
                std::size_t j = i;
                while (j < parts.size() && parts[j] == parts[i]) ++j;
                for (std::size_t m = 2; m <= j - i; ++m) denom *= m;
                for (std::size_t t = i; t < j; ++t)
                    for (std::int64_t m = 2; m <= parts[t]; ++m) denom *= m;
                i = j;
            }
            f(parts, boxes * n_fact / denom);
            return;
        }
        if (static_cast<std::int64_t>(parts.size()) == N) return;
        for (std::int64_t c = std::min(left, max_part); c >= 1; --c) {
            parts.push_back(c);
            rec(left - c, c);
            parts.pop_back();
        }
    };
    rec(n, n);
}

/// Exact law of an occupancy statistic by the selected enumeration route.
inline Law exact_occupancy_law(const Instance& inst, const occupancy_statistic& stat, const exact_options& opts = {}) {
    detail::check_support_finite(inst.pmf);
    auto route = opts.route;
    const bool uniform = inst.pmf.kind() == pmf_kind::uniform;
    if (route == enumeration_route::automatic) route = uniform ? enumeration_route::partition : enumeration_route::box_dp;
    Law law(stat.dimension);
    switch (route) {
        case enumeration_route::partition: {
            require(uniform, "partition enumeration requires a uniform pmf");
            const std::int64_t N = inst.pmf.boxes();
            big_int total = 1;
            for (std::int64_t i = 0; i < inst.n; ++i) total *= N;
            for_each_uniform_partition(
                N, inst.n,
                [&](std::span<const std::int64_t> parts, const big_int& count) {
                    outcome o(stat.dimension, 0);
                    for (auto c : parts) stat.accumulate(c, o);
                    using boost::multiprecision::cpp_rational;
                    law.support[o] += cpp_rational(count, total).convert_to<double>();
                },
                opts.budget);
            break;
        }
        case enumeration_route::composition:
            for_each_composition(
                inst.pmf, inst.n,
                [&](std::span<const std::int64_t> counts, double w) {
                    if (w == 0.0) return;
                    outcome o(stat.dimension, 0);
                    for (auto c : counts) stat.accumulate(c, o);
                    law.support[o] += w;
                },
                opts.budget);
            break;
        case enumeration_route::box_dp:
        case enumeration_route::automatic:
            law = detail::law_by_box_dp(inst, stat, opts.budget);
            break;
    }
    law.tail_error = detail::joint_omitted_mass(inst);
    return law;
}

/// Law of W, the number of tied pairs; a k-way shared value contributes C(k,2).
inline Law exact_law_W(const Instance& inst, const exact_options& opts = {}) {
    return exact_occupancy_law(inst, occupancy_statistic::pair_ties(), opts);
}

/// Law of Y_r, the number of boxes holding exactly r balls.
inline Law exact_law_Yr(const Instance& inst, std::int64_t r, const exact_options& opts = {}) {
    detail::check_order(inst, r);
    return exact_occupancy_law(inst, occupancy_statistic::strict_ties(r), opts);
}

/// Joint law of (Y_A, ..., Y_B).
inline Law exact_joint_law(const Instance& inst, std::int64_t A, std::int64_t B, const exact_options& opts = {}) {
    require_domain(A >= 2 && A <= B && B <= inst.n, "exact_joint_law: requires 2 <= A <= B <= n");
    return exact_occupancy_law(inst, occupancy_statistic::strict_tie_vector(A, B), opts);
}

/// P(W = 0) for n balls in N equally likely boxes: prod_{k=1}^{n-1} (1 - k/N).
inline double uniform_no_tie_probability(std::int64_t N, std::int64_t n) {
    require(N >= 1 && n >= 1, "uniform_no_tie_probability: N and n must be positive");
    if (n > N) return 0.0;
    double prod = 1.0;
    for (std::int64_t k = 1; k < n; ++k) prod *= 1.0 - static_cast<double>(k) / static_cast<double>(N);
    return prod;
}

/// One sample point: the support index of each ball and its probability.
struct Configuration {
    std::vector<std::int64_t> assignment;
    double probability;
};

/// Calls f on every one of the S^n configurations.
inline void for_each_configuration(const DiscretePMF& pmf, std::int64_t n,
                                   const std::function<void(const Configuration&)>& f,
                                   std::uint64_t budget = default_enumeration_budget) {
    const auto pts = pmf.effective_support();
    const auto S = static_cast<double>(pts.size());
    detail::check_budget(std::pow(S, static_cast<double>(n)), budget, "configuration enumeration");
    Configuration cfg{std::vector<std::int64_t>(static_cast<std::size_t>(n), 0), 1.0};
    std::function<void(std::size_t, double)> rec = [&](std::size_t ball, double w) {
        if (ball == cfg.assignment.size()) {
            cfg.probability = w;
            f(cfg);
            return;
        }
        for (std::size_t v = 0; v < pts.size(); ++v) {
            cfg.assignment[ball] = static_cast<std::int64_t>(v);
            rec(ball + 1, w * pts[v].mass);
        }
    };
    rec(0, 1.0);
}

struct coupling_check_result {
    double max_abs_discrepancy;
    double conditioning_probability;  // P(I_jx = 1)
    double truncation_mass;           // geometric mass beyond x_max, removed before checking
    std::size_t outcomes;             // distinct indicator vectors compared
};

/**
 * Exact check that forcing the r-set `members` into box `box` (ejecting the
 * other occupants of that box, each independently to box k != box with
 * probability p_k / (1 - p_box)) reproduces the conditional law of the
 * strict-tie indicator vector given that the r-set alone occupies `box`.
 *
 * `box` is an index into the effective support. Truncated geometric pmfs are
 * renormalized on {1..x_max}; the removed mass is reported, not hidden.
 */
inline coupling_check_result coupling_law_check(const Instance& inst, int r, std::span<const int> members, std::int64_t box,
                                                std::uint64_t budget = default_enumeration_budget) {
    const int n = static_cast<int>(inst.n);
    detail::check_order(inst, r);
    require(static_cast<int>(members.size()) == r, "coupling_law_check: the r-set must have r members");
    const auto subsets = subsets_of_size(n, r);
    require(subsets.size() <= 64, "coupling_law_check: more than 64 r-sets");
    std::uint64_t jmask = 0;
    for (int m : members) {
        require(m >= 0 && m < n, "coupling_law_check: member index out of range");
        jmask |= std::uint64_t{1} << m;
    }
    require(std::popcount(jmask) == r, "coupling_law_check: repeated member");
    const DiscretePMF pmf = inst.pmf.renormalized_truncation();
    const auto pts = pmf.effective_support();
    const auto S = static_cast<std::int64_t>(pts.size());
    require(box >= 0 && box < S, "coupling_law_check: box outside the support");
    const double px = pts[static_cast<std::size_t>(box)].mass;

    std::vector<std::int64_t> counts(static_cast<std::size_t>(S));
    auto indicators = [&](const std::vector<std::int64_t>& a) {
        std::fill(counts.begin(), counts.end(), 0);
        for (auto v : a) ++counts[static_cast<std::size_t>(v)];
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            const std::uint64_t s = subsets[i];
            const int first = std::countr_zero(s);
            const auto v = a[static_cast<std::size_t>(first)];
            bool tie = counts[static_cast<std::size_t>(v)] == r;
            for (int b = 0; tie && b < n; ++b)
                if ((s >> b) & 1U) tie = a[static_cast<std::size_t>(b)] == v;
            if (tie) bits |= std::uint64_t{1} << i;
        }
        return bits;
    };
    auto in_box_alone = [&](const std::vector<std::int64_t>& a) {
        for (int b = 0; b < n; ++b) {
            const bool member = (jmask >> b) & 1U;
            if (member != (a[static_cast<std::size_t>(b)] == box)) return false;
        }
        return true;
    };

    std::map<std::uint64_t, double> conditional;
    std::map<std::uint64_t, double> coupled;
    double event_mass = 0.0;
    std::vector<std::int64_t> moved;
    std::vector<int> ejected;
    for_each_configuration(
        pmf, n,
        [&](const Configuration& cfg) {
            if (in_box_alone(cfg.assignment)) {
                event_mass += cfg.probability;
                const auto bits = indicators(cfg.assignment);
                conditional[bits] += cfg.probability;
                coupled[bits] += cfg.probability;
                return;
            }
            moved = cfg.assignment;
            ejected.clear();
            for (int b = 0; b < n; ++b) {
                if ((jmask >> b) & 1U)
                    moved[static_cast<std::size_t>(b)] = box;
                else if (moved[static_cast<std::size_t>(b)] == box)
                    ejected.push_back(b);
            }
            std::function<void(std::size_t, double)> place = [&](std::size_t e, double w) {
                if (e == ejected.size()) {
                    coupled[indicators(moved)] += w;
                    return;
                }
                for (std::int64_t k = 0; k < S; ++k) {
                    if (k == box) continue;
                    moved[static_cast<std::size_t>(ejected[e])] = k;
                    place(e + 1, w * pts[static_cast<std::size_t>(k)].mass / (1.0 - px));
                }
            };
            place(0, cfg.probability);
        },
        budget);
    require_domain(event_mass > 0.0, "coupling_law_check: conditioning event has probability zero");

    for (auto& [bits, m] : conditional) m /= event_mass;
    double worst = 0.0;
    for (const auto& [bits, m] : coupled) {
        auto it = conditional.find(bits);
        worst = std::max(worst, std::abs(m - (it == conditional.end() ? 0.0 : it->second)));
    }
    for (const auto& [bits, m] : conditional)
        if (!coupled.contains(bits)) worst = std::max(worst, m);
    std::size_t distinct = coupled.size();
    for (const auto& [bits, m] : conditional) distinct += coupled.contains(bits) ? 0 : 1;
    return {worst, event_mass, inst.pmf.omitted_mass(), distinct};
}

}  // namespace tiepoisson
