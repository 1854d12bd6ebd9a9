#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tiepoisson/distributions.hpp"
#include "tiepoisson/rng.hpp"

namespace tiepoisson {

/// Geometric(p) on {1, 2, ...} by inversion: 1 + floor(log U / log(1-p)).
inline std::int64_t sample_geometric(counter_rng& rng, double log1m_p) {
    return 1 + static_cast<std::int64_t>(std::floor(std::log(rng.uniform_open0()) / log1m_p));
}

/// Draws scores from a DiscretePMF. Geometric draws use the full infinite
/// support, not the truncation used by enumeration.
class score_sampler {
public:
    explicit score_sampler(const DiscretePMF& pmf) : pmf_(pmf) {
        if (pmf.kind() == pmf_kind::geometric) log1m_p_ = std::log1p(-pmf.p());
        if (pmf.kind() == pmf_kind::explicit_masses) {
            double acc = 0.0;
            for (const auto& pt : pmf.points()) {
                acc += pt.mass;
                cumulative_.push_back(acc);
            }
        }
    }

    std::int64_t operator()(counter_rng& rng) const {
        switch (pmf_.kind()) {
            case pmf_kind::uniform:
                return 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(pmf_.boxes())));
            case pmf_kind::geometric:
                return sample_geometric(rng, log1m_p_);
            case pmf_kind::explicit_masses: {
                const double u = rng.uniform_open0() * cumulative_.back();
                auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
                if (it == cumulative_.end()) --it;
                return pmf_.points()[static_cast<std::size_t>(it - cumulative_.begin())].value;
            }
        }
        return 0;
    }

private:
    DiscretePMF pmf_;
    double log1m_p_ = 0.0;
    std::vector<double> cumulative_;
};

/// Box occupancy counts of a sample, in increasing order of score value.
inline std::vector<std::int64_t> occupancy_counts(std::vector<std::int64_t> scores) {
    std::sort(scores.begin(), scores.end());
    std::vector<std::int64_t> counts;
    for (std::size_t i = 0; i < scores.size();) {
        std::size_t j = i;
        while (j < scores.size() && scores[j] == scores[i]) ++j;
        counts.push_back(static_cast<std::int64_t>(j - i));
        i = j;
    }
    return counts;
}

}  // namespace tiepoisson
