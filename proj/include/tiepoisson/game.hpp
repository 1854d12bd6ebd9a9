#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiepoisson/error.hpp"
#include "tiepoisson/rng.hpp"
#include "tiepoisson/sampling.hpp"

namespace tiepoisson {

struct interval {
    double lo;
    double hi;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/**
 * Coin-flip elimination game: each of `players` flips a p-coin until heads;
 * a round with any repeated flip count is a tie and is replayed.
 *
 * Exact modes (2 and 3 players) fill p_tie, expected_rounds, expected_flips.
 * The n-player approximation centers them on the Poisson value and carries
 * the +-6np error band in the *_band fields.
 */
struct GameAnalytics {
    std::int64_t players = 2;
    double p = 0.5;
    double p_tie = 0.0;
    double expected_rounds = 1.0;
    double expected_flips = 0.0;
    std::map<std::string, double> breakdown;
    double approximation_error = 0.0;
    std::optional<interval> p_tie_band;
    std::optional<interval> rounds_band;
    std::optional<interval> flips_band;
};

namespace detail {
inline void check_coin(double p) { require(p > 0.0 && p < 1.0, "game: p must lie in (0,1)"); }
}  // namespace detail

inline GameAnalytics two_player(double p) {
    detail::check_coin(p);
    GameAnalytics g;
    g.players = 2;
    g.p = p;
    g.p_tie = p / (2.0 - p);
    g.expected_rounds = (2.0 - p) / (2.0 - 2.0 * p);
    g.expected_flips = 2.0 * (2.0 - p) / (p * (2.0 - 2.0 * p));
    return g;
}

/// P(tie) as the single rational function (5p^3 - 13p^2 + 9p) / ((2-p)(3-3p+p^2)).
inline double three_player_tie_rational(double p) {
    return (5.0 * p * p * p - 13.0 * p * p + 9.0 * p) / ((2.0 - p) * (3.0 - 3.0 * p + p * p));
}

inline GameAnalytics three_player(double p) {
    detail::check_coin(p);
    const double q = 3.0 - 3.0 * p + p * p;
    GameAnalytics g;
    g.players = 3;
    g.p = p;
    g.breakdown["A=B=C"] = p * p / q;
    g.breakdown["A>B=C"] = p * (1.0 - p) / q;
    g.breakdown["A=B>C"] = p * (1.0 - p) * (1.0 - p) / ((2.0 - p) * q);
    g.p_tie = g.breakdown["A=B=C"] + 3.0 * g.breakdown["A>B=C"] + 3.0 * g.breakdown["A=B>C"];
    g.expected_rounds = 1.0 / (1.0 - three_player_tie_rational(p));
    g.expected_flips = 3.0 / p * g.expected_rounds;
    return g;
}

/// n-player game through the Poisson approximation of W:
/// P(no tie) = exp(-n(n-1)p / (2(2-p))) +- 6np.
inline GameAnalytics n_player_approx(std::int64_t n, double p) {
    require(n >= 2, "game: at least two players required");
    detail::check_coin(p);
    const double nd = static_cast<double>(n);
    const double lam = nd * (nd - 1.0) * p / (2.0 * (2.0 - p));
    const double no_tie = std::exp(-lam);
    const double band = 6.0 * nd * p;
    require_domain(band < no_tie, "approximation band vacuous at these parameters (6np >= exp(-lambda))");
    GameAnalytics g;
    g.players = n;
    g.p = p;
    g.p_tie = 1.0 - no_tie;
    g.expected_rounds = 1.0 / no_tie;
    g.expected_flips = nd / p * g.expected_rounds;
    g.approximation_error = band;
    g.p_tie_band = interval{1.0 - no_tie - band, 1.0 - no_tie + band};
    g.rounds_band = interval{1.0 / (no_tie + band), 1.0 / (no_tie - band)};
    g.flips_band = interval{nd / p * g.rounds_band->lo, nd / p * g.rounds_band->hi};
    return g;
}

struct round_record {
    std::vector<std::int64_t> flips;  // per player
    std::int64_t ties = 0;            // W for this round
    bool game_over = false;           // W == 0
};

/// One round of the n-player game; reproducible from (seed, round_index).
inline round_record simulate_round(std::int64_t n, double p, std::uint64_t seed, std::uint64_t round_index = 0) {
    require(n >= 2, "game: at least two players required");
    detail::check_coin(p);
    counter_rng rng(seed, round_index);
    const double l = std::log1p(-p);
    round_record rec;
    rec.flips.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) rec.flips.push_back(sample_geometric(rng, l));
    for (auto c : occupancy_counts(rec.flips)) rec.ties += c * (c - 1) / 2;
    rec.game_over = rec.ties == 0;
    return rec;
}

}  // namespace tiepoisson
