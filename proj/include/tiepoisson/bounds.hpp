#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tiepoisson/combinatorics.hpp"
#include "tiepoisson/distributions.hpp"
#include "tiepoisson/error.hpp"

namespace tiepoisson {

/**
 * A total-variation bound and how it was assembled.
 *
 * bound_value is the sum of `terms`. `auxiliary` holds quantities reported
 * alongside (relaxations, sharper prefactor variants, ingredient values)
 * that do not enter the sum.
 */
struct BoundReport {
    std::string statistic;
    double bound_value = 0.0;
    std::map<std::string, double> terms;
    std::map<std::string, double> auxiliary;
    std::vector<std::string> validity_notes;
    std::vector<double> lambda;

    void finalize() {
        double s = 0.0;
        for (const auto& [name, v] : terms) s += v;
        bound_value = s;
    }
};

namespace detail {

inline std::string note(const std::string& label, double value) {
    std::ostringstream os;
    os.precision(6);
    os << label << " = " << value;
    return os.str();
}

inline void check_two_r(std::int64_t n, std::int64_t r) {
    require_domain(r >= 2, "tie order r must be >= 2");
    require_domain(n >= 2 * r, "bound requires n >= 2r (the coupling leaves n - 2r free balls)");
}

}  // namespace detail

/// d_TV(L(W), Po(lambda)) <= 2 n pi + 2 n rho / pi.
inline BoundReport tv_bound_W(const Instance& inst) {
    const double pi = collision_probability(inst.pmf, 2);
    const double rho = collision_probability(inst.pmf, 3);
    require_domain(pi > 0.0, "tv_bound_W: collision probability is zero, ties impossible");
    const double n = static_cast<double>(inst.n);
    BoundReport rep;
    rep.statistic = "W";
    rep.terms["two_n_pi"] = 2.0 * n * pi;
    rep.terms["two_n_rho_over_pi"] = 2.0 * n * rho / pi;
    rep.finalize();
    rep.lambda = {lambda_W(inst)};
    rep.auxiliary["pi"] = pi;
    rep.auxiliary["rho"] = rho;
    rep.auxiliary["intermediate"] = pi + 2.0 * (n - 2.0) * rho / pi + 2.0 * (n - 2.0) * pi;
    switch (inst.pmf.kind()) {
        case pmf_kind::uniform:
            rep.auxiliary["relaxed_4n_over_N"] = 4.0 * n / static_cast<double>(inst.pmf.boxes());
            rep.validity_notes.push_back(detail::note("n/N", n / static_cast<double>(inst.pmf.boxes())));
            break;
        case pmf_kind::geometric:
            rep.auxiliary["relaxed_6np"] = 6.0 * n * inst.pmf.p();
            rep.validity_notes.push_back(detail::note("np", n * inst.pmf.p()));
            break;
        case pmf_kind::explicit_masses:
            break;
    }
    return rep;
}

/// Case I kernel: p_y^r (1 - p_y/(1-p_x))^(n-2r) [ (1-p_x)^(-r) - (1-p_y)^r ].
inline double mu_y(double p_x, double p_y, std::int64_t n, std::int64_t r) {
    require_domain(p_x < 1.0, "mu_y: requires p_x < 1");
    require_domain(n >= 2 * r, "mu_y: requires n >= 2r");
    const double rr = static_cast<double>(r);
    const double free_balls = static_cast<double>(n - 2 * r);
    return std::pow(p_y, rr) * std::pow(1.0 - p_y / (1.0 - p_x), free_balls) *
           (std::pow(1.0 - p_x, -rr) - std::pow(1.0 - p_y, rr));
}

/// mu_y with x and y given as support values of `pmf`.
inline double mu_y(const DiscretePMF& pmf, std::int64_t n, std::int64_t r, std::int64_t x, std::int64_t y) {
    require_domain(x != y, "mu_y: requires x != y");
    return mu_y(pmf.mass(x), pmf.mass(y), n, r);
}

/**
 * General strict-tie bound for an arbitrary pmf:
 *
 *   pi + (1 ^ 1/lambda) sum_x C(n,r) pi_x [ C(n-r,r) sum_{y!=x} mu_y + r^2 lambda/n
 *        + C(n-r,r) pi_x + C(n-r,r) n p_x/(1-p_x) e^{n p_x} sum_{y!=x} p_y^{r+1} ]
 *
 * with pi_x = p_x^r (1-p_x)^(n-r). Geometric support is cut at x_max; the
 * contribution of the cut is bounded and carried in "truncation_tail".
 */
inline BoundReport tv_bound_Yr_general(const Instance& inst, std::int64_t r) {
    detail::check_two_r(inst.n, r);
    const auto n = inst.n;
    const double rr = static_cast<double>(r);
    const double nd = static_cast<double>(n);
    const auto pi_series = strict_tie_series(inst, r);
    const double c_nr = binomial(n, r);
    const double c_rest = binomial(n - r, r);
    const double lam_lo = c_nr * pi_series.value;
    const double lam_up = c_nr * (pi_series.value + pi_series.tail_error);
    const double factor = lam_lo > 0.0 ? std::min(1.0, 1.0 / lam_lo) : 1.0;
    const double sharp = lam_lo > 0.0 ? -std::expm1(-lam_lo) / lam_lo : 1.0;

    const auto classes = inst.pmf.mass_classes();
    const bool geometric = inst.pmf.kind() == pmf_kind::geometric;
    double tail_r = 0.0, tail_r1 = 0.0, q_max = 0.0;
    if (geometric) {
        const double p = inst.pmf.p();
        const double xm = static_cast<double>(inst.pmf.x_max());
        q_max = p * std::exp(xm * std::log1p(-p));
        tail_r = std::pow(q_max, rr) / detail::one_minus_pow_complement(p, rr);
        tail_r1 = std::pow(q_max, rr + 1.0) / detail::one_minus_pow_complement(p, rr + 1.0);
    }

    double agg_case1 = 0.0, agg_overlap = 0.0, agg_same = 0.0, agg_spoil = 0.0, agg_tail = 0.0;
    for (const auto& cx : classes) {
        const double px = cx.mass;
        const double pi_x = std::pow(px, rr) * std::pow(1.0 - px, nd - rr);
        const double weight = static_cast<double>(cx.multiplicity) * c_nr * pi_x;
        if (weight == 0.0) continue;
        double sum_mu = -mu_y(px, px, n, r);
        double sum_pow = -std::pow(px, rr + 1.0);
        for (const auto& cy : classes) {
            const double m = static_cast<double>(cy.multiplicity);
            sum_mu += m * mu_y(px, cy.mass, n, r);
            sum_pow += m * std::pow(cy.mass, rr + 1.0);
        }
        sum_mu = std::max(sum_mu, 0.0);
        sum_pow = std::max(sum_pow, 0.0);
        const double spoil_scale = c_rest * nd * px / (1.0 - px) * std::exp(nd * px);
        agg_case1 += weight * c_rest * sum_mu;
        agg_overlap += weight * rr * rr * lam_up / nd;
        agg_same += weight * c_rest * pi_x;
        agg_spoil += weight * spoil_scale * sum_pow;
        if (geometric)  // y beyond x_max
            agg_tail += weight * (c_rest * tail_r * std::pow(1.0 - px, -rr) + spoil_scale * tail_r1);
    }
    if (geometric) {  // x beyond x_max, where every p_x <= q_max
        const double bracket = c_rest * collision_probability(inst.pmf, static_cast<int>(r)) * std::pow(1.0 - q_max, -rr) +
                               rr * rr * lam_up / nd + c_rest * std::pow(q_max, rr) +
                               c_rest * nd * q_max / (1.0 - q_max) * std::exp(nd * q_max) *
                                   collision_probability(inst.pmf, static_cast<int>(r) + 1);
        agg_tail += c_nr * tail_r * bracket;
    }

    BoundReport rep;
    rep.statistic = "Y";
    rep.terms["pi"] = pi_series.value;
    rep.terms["case_I"] = factor * agg_case1;
    rep.terms["case_II_overlap"] = factor * agg_overlap;
    rep.terms["case_II_x"] = factor * agg_same;
    rep.terms["case_II_y"] = factor * agg_spoil;
    if (geometric) rep.terms["truncation_tail"] = factor * agg_tail + pi_series.tail_error;
    rep.finalize();
    rep.lambda = {lam_lo};
    rep.auxiliary["prefactor"] = factor;
    rep.auxiliary["sharp_prefactor"] = sharp;
    rep.auxiliary["sharp_bound"] =
        pi_series.value + pi_series.tail_error + sharp * (agg_case1 + agg_overlap + agg_same + agg_spoil + agg_tail);
    return rep;
}

/// Uniform specialization:
/// pi + (lambda ^ lambda^2) [ 2r/N e^{2r/(N-1)} + r^2/n + 1/N + n/N^2 e^{2n/(N-1)} ].
inline BoundReport tv_bound_Yr_uniform(std::int64_t N, std::int64_t n, std::int64_t r) {
    require(N >= 2, "tv_bound_Yr_uniform: N must be >= 2");
    detail::check_two_r(n, r);
    const Instance inst(n, DiscretePMF::uniform(N));
    const double Nd = static_cast<double>(N), nd = static_cast<double>(n), rr = static_cast<double>(r);
    const double pi = strict_tie_probability(inst, r);
    const double lam = lambda_r(inst, r);
    const double f = std::min(lam, lam * lam);
    BoundReport rep;
    rep.statistic = "Y";
    rep.terms["pi"] = pi;
    rep.terms["case_I"] = f * 2.0 * rr / Nd * std::exp(2.0 * rr / (Nd - 1.0));
    rep.terms["case_II_overlap"] = f * rr * rr / nd;
    rep.terms["case_II_x"] = f / Nd;
    rep.terms["case_II_y"] = f * nd / (Nd * Nd) * std::exp(2.0 * nd / (Nd - 1.0));
    rep.finalize();
    rep.lambda = {lam};
    rep.auxiliary["prefactor"] = f;
    rep.validity_notes.push_back(detail::note("n/N", nd / Nd));
    return rep;
}

/// Geometric specialization:
/// pi + (lambda ^ lambda^2) [ 2rp e^{2rp/(1-p)} + r^2/n + rp + n p^2 e^{np} ].
inline BoundReport tv_bound_Yr_geometric(double p, std::int64_t n, std::int64_t r) {
    require(p > 0.0 && p < 1.0, "tv_bound_Yr_geometric: p must lie in (0,1)");
    detail::check_two_r(n, r);
    const Instance inst(n, DiscretePMF::geometric(p));
    const double nd = static_cast<double>(n), rr = static_cast<double>(r);
    const auto pi = strict_tie_series(inst, r);
    const double lam = lambda_r(inst, r);
    const double f = std::min(lam, lam * lam);
    BoundReport rep;
    rep.statistic = "Y";
    rep.terms["pi"] = pi.value;
    rep.terms["case_I"] = f * 2.0 * rr * p * std::exp(2.0 * rr * p / (1.0 - p));
    rep.terms["case_II_overlap"] = f * rr * rr / nd;
    rep.terms["case_II_x"] = f * rr * p;
    rep.terms["case_II_y"] = f * nd * p * p * std::exp(nd * p);
    rep.finalize();
    rep.lambda = {lam};
    rep.auxiliary["prefactor"] = f;
    rep.auxiliary["pi_tail_error"] = pi.tail_error;
    rep.validity_notes.push_back(detail::note("n p^((r+1)/2)", nd * std::pow(p, (rr + 1.0) / 2.0)));
    rep.validity_notes.push_back(detail::note("r p", rr * p));
    return rep;
}

/// Classical uniform occupancy bound (lambda ^ lambda^2) {1/N + 6n/N^2 + 6r^2/n}.
inline double bhj_bound_uniform(std::int64_t N, std::int64_t n, std::int64_t r) {
    require(N >= 2, "bhj_bound_uniform: N must be >= 2");
    detail::check_two_r(n, r);
    const double Nd = static_cast<double>(N), nd = static_cast<double>(n), rr = static_cast<double>(r);
    const double lam = lambda_r(Instance(n, DiscretePMF::uniform(N)), r);
    return std::min(lam, lam * lam) * (1.0 / Nd + 6.0 * nd / (Nd * Nd) + 6.0 * rr * rr / nd);
}

struct crossover_value {
    double lhs;  // 2r/N e^{2r/(N-1)}
    double rhs;  // 5r^2/n + (6 - e^{2n/(N-1)}) n/N^2
    bool holds() const { return lhs <= rhs; }
};

/// Condition under which the uniform strict-tie bound beats bhj_bound_uniform.
inline crossover_value bhj_crossover(std::int64_t N, std::int64_t n, std::int64_t r) {
    require(N >= 2 && n >= 1 && r >= 2, "bhj_crossover: invalid arguments");
    const double Nd = static_cast<double>(N), nd = static_cast<double>(n), rr = static_cast<double>(r);
    return {2.0 * rr / Nd * std::exp(2.0 * rr / (Nd - 1.0)),
            5.0 * rr * rr / nd + (6.0 - std::exp(2.0 * nd / (Nd - 1.0))) * nd / (Nd * Nd)};
}

/**
 * Order-of-magnitude bound for d_TV(L(Y_A..Y_B), prod Po(lambda_a)), uniform
 * occupancy only:
 *
 *   sum_a lambda_a^2 (2a/N + a^2/n + 1/N + n/N^2)
 *     + sum_a lambda_a sum_{b!=a} lambda_b ((a+b)/N + ab/n + 1/N + n/N^2)
 *
 * Constants are 1; treat as a magnitude certificate, not a strict bound.
 * T1 = sum_a C(n,a) N^{2-2a} (1-1/N)^{2n-2a} is reported in auxiliary.
 */
inline BoundReport tv_bound_multivariate(std::int64_t N, std::int64_t n, std::int64_t A, std::int64_t B) {
    require(A <= B, "tv_bound_multivariate: requires A <= B");
    require(N >= 2, "tv_bound_multivariate: N must be >= 2");
    require_domain(A >= 2 && B <= n, "tv_bound_multivariate: requires 2 <= A <= B <= n");
    const Instance inst(n, DiscretePMF::uniform(N));
    const double Nd = static_cast<double>(N), nd = static_cast<double>(n);
    std::vector<double> lam;
    for (std::int64_t a = A; a <= B; ++a) lam.push_back(lambda_r(inst, a));

    double t21 = 0.0, t22 = 0.0, t23 = 0.0, t1 = 0.0;
    double t3_case1 = 0.0, t3_overlap = 0.0, t3_x = 0.0, t3_y = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double a = static_cast<double>(A) + static_cast<double>(i);
        const double l2 = lam[i] * lam[i];
        t21 += l2 * 2.0 * a / Nd;
        t22 += l2 * a * a / nd;
        t23 += l2 * (1.0 / Nd + nd / (Nd * Nd));
        t1 += lam[i] * strict_tie_probability(inst, A + static_cast<std::int64_t>(i));
        for (std::size_t j = 0; j < lam.size(); ++j) {
            if (j == i) continue;
            const double b = static_cast<double>(A) + static_cast<double>(j);
            const double w = lam[i] * lam[j];
            t3_case1 += w * (a + b) / Nd;
            t3_overlap += w * a * b / nd;
            t3_x += w / Nd;
            t3_y += w * nd / (Nd * Nd);
        }
    }
    BoundReport rep;
    rep.statistic = "Z";
    rep.terms["T21"] = t21;
    rep.terms["T22"] = t22;
    rep.terms["T23"] = t23;
    rep.terms["T3_caseI"] = t3_case1;
    rep.terms["T3_overlap"] = t3_overlap;
    rep.terms["T3_x"] = t3_x;
    rep.terms["T3_y"] = t3_y;
    rep.finalize();
    rep.lambda = lam;
    rep.auxiliary["T1"] = t1;
    rep.auxiliary["diagonal"] = t21 + t22 + t23;
    rep.auxiliary["cross"] = t3_case1 + t3_overlap + t3_x + t3_y;
    rep.validity_notes.push_back(detail::note("n/N", nd / Nd));
    return rep;
}

/// lambda_a^2 (2a/N + a^2/n + 1/N + n/N^2): one diagonal summand of the
/// multivariate bound.
inline double multivariate_diagonal_summand(std::int64_t N, std::int64_t n, std::int64_t a) {
    const double Nd = static_cast<double>(N), nd = static_cast<double>(n), ad = static_cast<double>(a);
    const double l = lambda_r(Instance(n, DiscretePMF::uniform(N)), a);
    return l * l * (2.0 * ad / Nd + ad * ad / nd + 1.0 / Nd + nd / (Nd * Nd));
}

struct window_options {
    double lambda_threshold = 1.0;
    double target = 0.1;
    std::int64_t max_order = 200;
};

struct window_result {
    bool found = false;
    std::int64_t A = 0;
    std::int64_t B = 0;
    std::optional<BoundReport> report;
    std::string diagnostic;
    double analytic_A = 0.0;  // log N / (3 log log N)
    double analytic_B = 0.0;  // log N / (2 log log N)
    bool n_is_N_over_logN = false;
};

/**
 * Widest integer window [A, B] with lambda_B >= threshold and
 * tv_bound_multivariate(N, n, A, B) <= target. Ties on width go to the
 * smaller bound. The log N / (3 log log N), log N / (2 log log N) window is
 * evaluated for comparison.
 */
inline window_result regime_window(std::int64_t N, std::int64_t n, const window_options& opts = {}) {
    window_result out;
    if (N >= 16) {
        const double ln = std::log(static_cast<double>(N));
        out.analytic_A = ln / (3.0 * std::log(ln));
        out.analytic_B = ln / (2.0 * std::log(ln));
        out.n_is_N_over_logN = n == static_cast<std::int64_t>(std::llround(static_cast<double>(N) / ln));
    }
    if (n < 2 || n >= N) {
        out.diagnostic = "no window: requires 2 <= n < N (n << N occupancy regime)";
        return out;
    }
    const Instance inst(n, DiscretePMF::uniform(N));
    const std::int64_t top = std::min(n, opts.max_order);
    std::vector<double> lam(static_cast<std::size_t>(top) + 1, 0.0);
    std::int64_t last_b = 0;
    for (std::int64_t a = 2; a <= top; ++a) {
        lam[static_cast<std::size_t>(a)] = lambda_r(inst, a);
        if (lam[static_cast<std::size_t>(a)] >= opts.lambda_threshold) last_b = a;
    }
    if (last_b == 0) {
        out.diagnostic = "no window: lambda_a < " + std::to_string(opts.lambda_threshold) + " for every a >= 2";
        return out;
    }
    double best_bound = 0.0;
    for (std::int64_t B = 2; B <= last_b; ++B) {
        if (lam[static_cast<std::size_t>(B)] < opts.lambda_threshold) continue;
        for (std::int64_t A = 2; A <= B; ++A) {
            if (out.found && B - A < out.B - out.A) continue;
            const auto rep = tv_bound_multivariate(N, n, A, B);
            if (rep.bound_value > opts.target) continue;
            const bool wider = !out.found || B - A > out.B - out.A;
            if (wider || rep.bound_value < best_bound) {
                out.found = true;
                out.A = A;
                out.B = B;
                best_bound = rep.bound_value;
                out.report = rep;
            }
        }
    }
    if (!out.found) out.diagnostic = "no window meets bound <= " + std::to_string(opts.target) + " with lambda_B >= threshold";
    return out;
}

}  // namespace tiepoisson
