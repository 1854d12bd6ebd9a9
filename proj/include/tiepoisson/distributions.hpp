#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "tiepoisson/combinatorics.hpp"
#include "tiepoisson/error.hpp"

namespace tiepoisson {

enum class pmf_kind { explicit_masses, uniform, geometric };

struct mass_point {
    std::int64_t value;
    double mass;
};

/// A group of support points sharing one mass. Uniform pmfs collapse to a
/// single class of multiplicity N, which keeps large-N sums O(1).
struct mass_class {
    double mass;
    std::int64_t multiplicity;
};

/// A value together with the mass its truncated evaluation may have missed.
struct series_value {
    double value;
    double tail_error;
};

/**
 * Score distribution on the positive integers.
 *
 * Uniform support {1..N} is never materialized unless a caller asks for it.
 * Geometric support is infinite; every support-walking routine stops at
 * x_max, the smallest cutoff leaving omitted mass (1-p)^x_max at or below
 * the tail tolerance, and reports that omission.
 */
class DiscretePMF {
public:
    static DiscretePMF explicit_masses(std::vector<mass_point> points) {
        require(!points.empty(), "explicit pmf: empty support");
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            require(points[i].value >= 1, "explicit pmf: values must be positive integers");
            require(points[i].mass >= 0.0 && points[i].mass <= 1.0,
                    "explicit pmf: masses must lie in [0,1]");
            if (i > 0)
                require(points[i].value > points[i - 1].value,
                        "explicit pmf: values must be strictly increasing");
            total += points[i].mass;
        }
        require(std::abs(total - 1.0) <= 1e-12, "explicit pmf: masses must sum to 1");
        DiscretePMF pmf;
        pmf.kind_ = pmf_kind::explicit_masses;
        pmf.points_ = std::move(points);
        return pmf;
    }

    /// Explicit pmf on {1..masses.size()}.
    static DiscretePMF from_masses(const std::vector<double>& masses) {
        std::vector<mass_point> pts;
        pts.reserve(masses.size());
        for (std::size_t i = 0; i < masses.size(); ++i)
            pts.push_back({static_cast<std::int64_t>(i) + 1, masses[i]});
        return explicit_masses(std::move(pts));
    }

    static DiscretePMF uniform(std::int64_t n_boxes) {
        require(n_boxes >= 1, "uniform pmf: N must be a positive integer");
        DiscretePMF pmf;
        pmf.kind_ = pmf_kind::uniform;
        pmf.boxes_ = n_boxes;
        return pmf;
    }

    static DiscretePMF geometric(double p, double tail_tolerance = 1e-12) {
        require(p > 0.0 && p < 1.0, "geometric pmf: p must lie in (0,1)");
        require(tail_tolerance > 0.0 && tail_tolerance < 1.0,
                "geometric pmf: tail tolerance must lie in (0,1)");
        const double cut = std::ceil(std::log(tail_tolerance) / std::log1p(-p));
        return make_geometric(p, std::max<std::int64_t>(1, static_cast<std::int64_t>(cut)),
                                   tail_tolerance);
    }

    /// Geometric pmf with an explicit support cutoff.
    static DiscretePMF truncated_geometric(double p, std::int64_t x_max) {
        require(p > 0.0 && p < 1.0, "geometric pmf: p must lie in (0,1)");
        require(x_max >= 1, "geometric pmf: x_max must be >= 1");
        return make_geometric(p, x_max, std::exp(static_cast<double>(x_max) * std::log1p(-p)));
    }

    pmf_kind kind() const noexcept { return kind_; }
    std::int64_t boxes() const noexcept { return boxes_; }
    double p() const noexcept { return p_; }
    double tail_tolerance() const noexcept { return tail_tolerance_; }
    std::int64_t x_max() const noexcept { return x_max_; }
    const std::vector<mass_point>& points() const noexcept { return points_; }

    /// Number of support points walked by enumeration routines.
    std::int64_t effective_size() const noexcept {
        switch (kind_) {
            case pmf_kind::explicit_masses:
                return static_cast<std::int64_t>(points_.size());
            case pmf_kind::uniform:
                return boxes_;
            case pmf_kind::geometric:
                return x_max_;
        }
        return 0;
    }

    /// Mass outside the effective support: (1-p)^x_max for geometric, else 0.
    double omitted_mass() const noexcept {
        if (kind_ != pmf_kind::geometric) return 0.0;
        return std::exp(static_cast<double>(x_max_) * std::log1p(-p_));
    }

    double mass(std::int64_t value) const noexcept {
        switch (kind_) {
            case pmf_kind::explicit_masses: {
                auto it = std::lower_bound(points_.begin(), points_.end(), value,
                                           [](const mass_point& a, std::int64_t v) { return a.value < v; });
                return (it != points_.end() && it->value == value) ? it->mass : 0.0;
            }
            case pmf_kind::uniform:
                return (value >= 1 && value <= boxes_) ? 1.0 / static_cast<double>(boxes_) : 0.0;
            case pmf_kind::geometric:
                return value >= 1 ? p_ * std::exp(static_cast<double>(value - 1) * std::log1p(-p_)) : 0.0;
        }
        return 0.0;
    }

    /// Effective support as explicit points (materializes uniform support).
    std::vector<mass_point> effective_support() const {
        if (kind_ == pmf_kind::explicit_masses) return points_;
        std::vector<mass_point> out;
        const auto size = effective_size();
        out.reserve(static_cast<std::size_t>(size));
        for (std::int64_t v = 1; v <= size; ++v) out.push_back({v, mass(v)});
        return out;
    }

    std::vector<mass_class> mass_classes() const {
        if (kind_ == pmf_kind::uniform) return {{1.0 / static_cast<double>(boxes_), boxes_}};
        std::vector<mass_class> out;
        for (const auto& pt : effective_support()) out.push_back({pt.mass, 1});
        return out;
    }

    /// Proper distribution on the effective support; geometric masses are
    /// renormalized by 1 - omitted_mass().
    DiscretePMF renormalized_truncation() const {
        if (kind_ != pmf_kind::geometric) return *this;
        auto pts = effective_support();
        const double keep = 1.0 - omitted_mass();
        double total = 0.0;
        for (auto& pt : pts) {
            pt.mass /= keep;
            total += pt.mass;
        }
        pts.back().mass += 1.0 - total;
        return explicit_masses(std::move(pts));
    }

    std::string describe() const {
        switch (kind_) {
            case pmf_kind::explicit_masses:
                return "explicit(" + std::to_string(points_.size()) + " points)";
            case pmf_kind::uniform:
                return "uniform(N=" + std::to_string(boxes_) + ")";
            case pmf_kind::geometric:
                return "geometric(p=" + std::to_string(p_) + ")";
        }
        return {};
    }

private:
    DiscretePMF() = default;

    static DiscretePMF make_geometric(double p, std::int64_t x_max, double tol) {
        DiscretePMF pmf;
        pmf.kind_ = pmf_kind::geometric;
        pmf.p_ = p;
        pmf.x_max_ = x_max;
        pmf.tail_tolerance_ = tol;
        return pmf;
    }

    pmf_kind kind_ = pmf_kind::uniform;
    std::vector<mass_point> points_;
    std::int64_t boxes_ = 1;
    double p_ = 0.0;
    double tail_tolerance_ = 0.0;
    std::int64_t x_max_ = 0;
};

/// n players (balls) with i.i.d. scores drawn from `pmf`.
struct Instance {
    std::int64_t n;
    DiscretePMF pmf;

    Instance(std::int64_t players, DiscretePMF dist) : n(players), pmf(std::move(dist)) {
        require(n >= 2, "instance: n must be >= 2");
    }
};

namespace detail {

inline void check_order(const Instance& inst, std::int64_t r) {
    require_domain(r >= 2 && r <= inst.n, "tie order r must satisfy 2 <= r <= n");
}

// 1 - (1-p)^k without cancellation
inline double one_minus_pow_complement(double p, double k) { return -std::expm1(k * std::log1p(-p)); }

inline double log_uniform_strict_tie(std::int64_t N, std::int64_t n, std::int64_t r) {
    const double logN = std::log(static_cast<double>(N));
    if (N == 1) return n == r ? 0.0 : -std::numeric_limits<double>::infinity();
    return static_cast<double>(1 - r) * logN +
           static_cast<double>(n - r) * std::log1p(-1.0 / static_cast<double>(N));
}

}  // namespace detail

/// Sum over the support of p_x^k; k = 2 is P(X1 = X2), k = 3 is P(X1 = X2 = X3).
inline double collision_probability(const DiscretePMF& pmf, int k) {
    require(k >= 2, "collision_probability: k must be >= 2");
    switch (pmf.kind()) {
        case pmf_kind::uniform:
            return std::pow(static_cast<double>(pmf.boxes()), 1.0 - k);
        case pmf_kind::geometric: {
            const double p = pmf.p();
            return std::pow(p, k) / detail::one_minus_pow_complement(p, k);
        }
        case pmf_kind::explicit_masses: {
            double s = 0.0;
            for (const auto& pt : pmf.points()) s += std::pow(pt.mass, k);
            return s;
        }
    }
    return 0.0;
}

/// Probability that a fixed r-set of players forms a strict tie:
/// sum_x p_x^r (1 - p_x)^(n-r). Geometric series are truncated at x_max and
/// the omitted mass is returned as tail_error.
inline series_value strict_tie_series(const Instance& inst, std::int64_t r) {
    detail::check_order(inst, r);
    const auto& pmf = inst.pmf;
    const double rest = static_cast<double>(inst.n - r);
    switch (pmf.kind()) {
        case pmf_kind::uniform:
            return {std::exp(detail::log_uniform_strict_tie(pmf.boxes(), inst.n, r)), 0.0};
        case pmf_kind::explicit_masses: {
            double s = 0.0;
            for (const auto& pt : pmf.points())
                s += std::pow(pt.mass, static_cast<double>(r)) * std::pow(1.0 - pt.mass, rest);
            return {s, 0.0};
        }
        case pmf_kind::geometric: {
            const double p = pmf.p();
            const double lq = std::log1p(-p);
            double s = 0.0;
            for (std::int64_t x = 1; x <= pmf.x_max(); ++x) {
                const double px = p * std::exp(static_cast<double>(x - 1) * lq);
                s += std::pow(px, static_cast<double>(r)) * std::exp(rest * std::log1p(-px));
            }
            // sum_{x > x_max} p_x^r, a geometric series with ratio (1-p)^r
            const double rr = static_cast<double>(r);
            const double tail = std::exp(rr * static_cast<double>(pmf.x_max()) * lq) * std::pow(p, rr) /
                                detail::one_minus_pow_complement(p, rr);
            return {s, tail};
        }
    }
    return {0.0, 0.0};
}

inline double strict_tie_probability(const Instance& inst, std::int64_t r) {
    return strict_tie_series(inst, r).value;
}

struct pi_bounds {
    double lower;
    double upper;
};

/// Closed-form sandwich for the geometric strict-tie probability. Raw values,
/// the lower bound is not clamped at zero.
inline pi_bounds geo_pi_bounds(const Instance& inst, std::int64_t r) {
    require_domain(inst.pmf.kind() == pmf_kind::geometric, "geo_pi_bounds: pmf must be geometric");
    detail::check_order(inst, r);
    const double p = inst.pmf.p();
    const double rr = static_cast<double>(r);
    const double m = static_cast<double>(inst.n - r);
    const double d_lower = 2.0 - rr * p;
    const double d_upper1 = 2.0 - (rr - 1.0) * p;
    const double d_upper2 = 2.0 - (rr + 1.0) * p;
    require_domain(d_lower > 0.0 && d_upper1 > 0.0 && d_upper2 > 0.0,
                   "geo_pi_bounds: requires rp < 2 and (r+1)p < 2");
    const double lower = std::pow(p, rr - 1.0) / rr - 2.0 * m * std::pow(p, rr) / ((rr + 1.0) * d_lower);
    const double upper = 2.0 * std::pow(p, rr - 1.0) / (rr * d_upper1) - m * std::pow(p, rr) / (rr + 1.0) +
                         m * m * std::pow(p, rr + 1.0) / ((rr + 2.0) * d_upper2);
    return {lower, upper};
}

/// Expected number of boxes holding exactly r balls: C(n, r) * pi.
inline double lambda_r(const Instance& inst, std::int64_t r) {
    detail::check_order(inst, r);
    const double c = binomial(inst.n, r);
    if (inst.pmf.kind() == pmf_kind::uniform) {
        const double log_pi = detail::log_uniform_strict_tie(inst.pmf.boxes(), inst.n, r);
        if (std::isinf(c) || log_pi < -690.0) return std::exp(log_binomial(inst.n, r) + log_pi);
        return c * std::exp(log_pi);
    }
    return c * strict_tie_probability(inst, r);
}

/// E(W) = C(n, 2) * P(X1 = X2).
inline double lambda_W(const Instance& inst) {
    return binomial(inst.n, 2) * collision_probability(inst.pmf, 2);
}

/// Stirling-form approximation N (n e / (N a))^a / sqrt(2 pi a) of the
/// uniform lambda_a. No error guarantee; meant for n << N.
inline double lambda_asymptotic(std::int64_t N, std::int64_t n, std::int64_t a) {
    require(N >= 1 && n >= 1, "lambda_asymptotic: N and n must be positive");
    require(a >= 2, "lambda_asymptotic: a must be >= 2");
    const double ad = static_cast<double>(a);
    const double log_ratio = std::log(static_cast<double>(n)) + 1.0 - std::log(static_cast<double>(N)) - std::log(ad);
    return std::exp(std::log(static_cast<double>(N)) + ad * log_ratio) / std::sqrt(2.0 * std::numbers::pi * ad);
}

}  // namespace tiepoisson
