// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tiepoisson/bounds.hpp"
#include "tiepoisson/cli.hpp"
#include "tiepoisson/combinatorics.hpp"
#include "tiepoisson/exact_oracle.hpp"
#include "tiepoisson/game.hpp"
#include "tiepoisson/json_io.hpp"
#include "tiepoisson/montecarlo.hpp"
#include "tiepoisson/poisson.hpp"

using namespace tiepoisson;

namespace {

struct verdict {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

json cli_json(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    if (code != 0) throw std::runtime_error("cli exited " + std::to_string(code) + ": " + err.str());
    return json::parse(out.str());
}

std::string cli_text(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    if (code != 0) throw std::runtime_error("cli exited " + std::to_string(code) + ": " + err.str());
    return out.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

verdict game_closed_forms() {
    verdict v;
    const auto two = cli_json({"game", "--players", "2", "--p", "0.5"});
    if (!close(two["p_tie"], 1.0 / 3.0, 1e-12)) v.fail("2-player p_tie");
    if (!close(two["E_R"], 1.5, 1e-12)) v.fail("2-player E_R");
    if (!close(two["E_F"], 6.0, 1e-12)) v.fail("2-player E_F");
    const auto three = cli_json({"game", "--players", "3", "--p", "0.5"});
    if (!close(three["breakdown"]["A=B=C"], 1.0 / 7.0, 1e-12)) v.fail("P(A=B=C)");
    if (!close(three["breakdown"]["A>B=C"], 1.0 / 7.0, 1e-12)) v.fail("P(A>B=C)");
    if (!close(three["breakdown"]["A=B>C"], 1.0 / 21.0, 1e-12)) v.fail("P(A=B>C)");
    if (!close(three["p_tie"], 5.0 / 7.0, 1e-12)) v.fail("3-player p_tie");
    if (!close(three["E_R"], 3.5, 1e-12)) v.fail("3-player E_R");
    if (!close(three["E_F"], 21.0, 1e-12)) v.fail("3-player E_F");
    if (v.pass) v.detail = "2p: 1/3, 1.5, 6; 3p: 1/7, 1/7, 1/21, 5/7, 3.5, 21";
    return v;
}

verdict three_player_identity() {
    verdict v;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = 0.01 + 0.98 * (i + 0.5) / 100.0;
        worst = std::max(worst, std::abs(three_player(p).p_tie - three_player_tie_rational(p)));
    }
    if (worst > 1e-12) v.fail(fmt("max |diff| = %.3g", worst));
    else v.detail = fmt("max |diff| = %.3g over 100 p", worst);
    return v;
}

verdict oracle_formula_equivalence() {
    verdict v;
    double worst = 0.0;
    int cells = 0;
    for (std::int64_t N = 1; N <= 12; ++N)
        for (std::int64_t n = 2; n <= 6; ++n) {
            const Instance inst(n, DiscretePMF::uniform(N));
            const double lw = binomial(n, 2) / static_cast<double>(N);
            worst = std::max(worst, std::abs(exact_law_W(inst).mean() - lw) / lw);
            if (n >= 3) {
                const auto joint = exact_joint_law(inst, 2, n);
                for (std::int64_t r = 2; r <= n; ++r) {
                    const auto yr = exact_law_Yr(inst, r);
                    const double lam = lambda_r(inst, r);
                    if (lam > 0.0) worst = std::max(worst, std::abs(yr.mean() - lam) / lam);
                    else if (yr.mean() != 0.0) v.fail("nonzero mean where lambda_r = 0");
                    const auto marg = joint.marginal(static_cast<std::size_t>(r - 2));
                    if (marg.support.size() != yr.support.size()) v.fail("marginal support differs");
                    // both routes enumerate the same partitions with exact weights
                    if (exact_tv(marg, yr).value > 1e-15) v.fail(fmt("marginal mismatch N=%g n=%g", N, n));
                }
            }
            ++cells;
        }
    if (worst > 1e-10) v.fail(fmt("worst relative mean error %.3g", worst));
    if (v.pass) v.detail = fmt("%g instances, worst relative mean error %.3g", cells, worst);
    return v;
}

verdict pair_tie_dominance() {
    verdict v;
    double slack = 1e9;
    for (std::int64_t N = 1; N <= 20; ++N)
        for (std::int64_t n = 2; n <= 6; ++n) {
            const Instance inst(n, DiscretePMF::uniform(N));
            const auto tv = exact_tv(exact_law_W(inst), poisson_law(lambda_W(inst)));
            const double b = tv_bound_W(inst).bound_value;
            slack = std::min(slack, b - tv.upper);
            if (tv.upper > b) v.fail(fmt("uniform N=%g n=%g tv=%.4g", N, n, tv.value));
        }
    for (double p : {0.2, 0.3})
        for (std::int64_t n = 2; n <= 5; ++n) {
            const Instance inst(n, DiscretePMF::geometric(p));
            const auto tv = exact_tv(exact_law_W(inst), poisson_law(lambda_W(inst)));
            const double b = tv_bound_W(inst).bound_value;
            slack = std::min(slack, b - tv.upper);
            if (tv.upper > b) v.fail(fmt("geometric p=%g n=%g tv=%.4g", p, n, tv.value));
        }
    if (v.pass) v.detail = fmt("min(bound - tv_upper) = %.4g", slack);
    return v;
}

verdict strict_tie_dominance() {
    verdict v;
    double slack = 1e9;
    for (std::int64_t N = 2; N <= 12; ++N)
        for (std::int64_t n = 4; n <= 6; ++n)
            for (std::int64_t r : {2, 3}) {
                if (n < 2 * r) continue;
                const Instance inst(n, DiscretePMF::uniform(N));
                const auto tv = exact_tv(exact_law_Yr(inst, r), poisson_law(lambda_r(inst, r)));
                const double bu = tv_bound_Yr_uniform(N, n, r).bound_value;
                const double bg = tv_bound_Yr_general(inst, r).bound_value;
                slack = std::min({slack, bu - tv.upper, bg - tv.upper});
                if (tv.upper > bu || tv.upper > bg) v.fail(fmt("uniform N=%g n=%g r=%g", N, n, r));
            }
    for (double p : {0.2, 0.3})
        for (std::int64_t n = 4; n <= 6; ++n) {
            const Instance inst(n, DiscretePMF::geometric(p));
            const auto tv = exact_tv(exact_law_Yr(inst, 2), poisson_law(lambda_r(inst, 2)));
            const double b = tv_bound_Yr_geometric(p, n, 2).bound_value;
            slack = std::min(slack, b - tv.upper);
            if (tv.upper > b) v.fail(fmt("geometric p=%g n=%g", p, n));
        }
    if (v.pass) v.detail = fmt("min(bound - tv_upper) = %.4g", slack);
    return v;
}

verdict coupling_identity() {
    verdict v;
    double worst = 0.0;
    int checks = 0;
    for (std::int64_t N = 1; N <= 4; ++N)
        for (std::int64_t n = 2; n <= 5; ++n)
            for (int r : {2, 3}) {
                if (r > n) continue;
                const Instance inst(n, DiscretePMF::uniform(N));
                for (auto mask : subsets_of_size(static_cast<int>(n), r)) {
                    std::vector<int> members;
                    for (int b = 0; b < n; ++b)
                        if ((mask >> b) & 1) members.push_back(b);
                    for (std::int64_t x = 0; x < N; ++x) {
                        try {
                            worst = std::max(worst, coupling_law_check(inst, r, members, x).max_abs_discrepancy);
                            ++checks;
                        } catch (const domain_error&) {
                            // P(I_jx = 1) = 0 (e.g. n - r balls cannot avoid box x when N = 1)
                        }
                    }
                }
            }
    if (worst > 1e-10) v.fail(fmt("worst discrepancy %.3g", worst));
    else v.detail = fmt("%g (instance, j, x) checks, worst discrepancy %.3g", checks, worst);
    return v;
}

verdict birthday() {
    verdict v;
    const Instance inst(23, DiscretePMF::uniform(365));
    const auto law = exact_law_W(inst);
    double prod = 1.0;
    for (int k = 1; k <= 22; ++k) prod *= 1.0 - k / 365.0;
    const double exact = law.mass(0);
    if (!close(exact, prod, 1e-12)) v.fail(fmt("P(W=0)=%.15g vs product %.15g", exact, prod));
    if (!close(exact, uniform_no_tie_probability(365, 23), 1e-12)) v.fail("falling-factorial oracle mismatch");
    const double gap = std::abs(std::exp(-lambda_W(inst)) - exact);
    const double bound = tv_bound_W(inst).bound_value;
    if (!close(gap, 0.0073, 0.0005)) v.fail(fmt("|e^-lambda - exact| = %.5g", gap));
    if (gap > bound) v.fail("gap exceeds bound");
    if (!close(bound, 4.0 * 23.0 / 365.0, 5e-4)) v.fail(fmt("bound %.5g", bound));
    const auto sim = run(SimConfig{inst, statistic_spec::pair_ties(), 1'000'000, 20240601, 1});
    const double mc = sim.empirical_law.mass(0);
    if (std::abs(mc - exact) > 0.002) v.fail(fmt("Monte Carlo P(W=0)=%.5g", mc));
    if (v.pass) v.detail = fmt("exact %.6f, gap %.4f <= bound %.4f", exact, gap, bound) + fmt(", MC %.5f", mc);
    return v;
}

verdict geometric_sandwich() {
    verdict v;
    int cells = 0, skipped = 0;
    for (double p : {1e-3, 1e-2})
        for (std::int64_t n : {5, 10, 50})
            for (std::int64_t r : {2, 3}) {
                const Instance inst(n, DiscretePMF::geometric(p));
                pi_bounds pb{};
                try {
                    pb = geo_pi_bounds(inst, r);
                } catch (const domain_error&) {
                    ++skipped;
                    continue;
                }
                const double pi = strict_tie_probability(inst, r);
                if (!(pb.lower <= pi && pi <= pb.upper))
                    v.fail(fmt("p=%g n=%g: pi=%.6g outside", p, n, pi) + fmt(" [%.6g, %.6g]", pb.lower, pb.upper));
                ++cells;
            }
    if (v.pass) v.detail = fmt("%g cells bracketed, %g skipped", cells, skipped);
    return v;
}

verdict bhj_comparison() {
    verdict v;
    const auto rep = cli_json({"bound", "--model", "uniform", "--N", "365", "--n", "23", "--statistic", "Y", "--r", "2",
                               "--compare-bhj"});
    const double ours = rep["bound"];
    const double bhj = rep["bhj_bound"];
    const bool holds = rep["crossover"]["holds"];
    if (!(ours < bhj)) v.fail(fmt("bound %.4g not below classical %.4g", ours, bhj));
    if (!holds) v.fail("crossover predicate false");
    if (v.pass) v.detail = fmt("bound %.4f < classical %.4f, crossover holds", ours, bhj);
    return v;
}

verdict multivariate_magnitude() {
    verdict v;
    double worst = 0.0;
    for (std::int64_t N = 2; N <= 10; ++N)
        for (std::int64_t n = 3; n <= 6; ++n) {
            const Instance inst(n, DiscretePMF::uniform(N));
            const auto joint = exact_joint_law(inst, 2, 3);
            const auto ref = product_poisson_law(PoissonSpec{{lambda_r(inst, 2), lambda_r(inst, 3)}});
            const double ratio = exact_tv(joint, ref).value / tv_bound_multivariate(N, n, 2, 3).bound_value;
            worst = std::max(worst, ratio);
        }
    if (worst > 10.0) v.fail(fmt("worst ratio %.4g", worst));
    for (std::int64_t a = 6; a <= 9; ++a) {
        double prev = INFINITY;
        for (std::int64_t N : {10'000, 100'000, 1'000'000}) {
            const auto n = std::llround(std::pow(static_cast<double>(N), 0.9));
            const double s = multivariate_diagonal_summand(N, n, a);
            if (!(s < prev)) v.fail(fmt("summand a=%g not decreasing at N=%g", a, N));
            prev = s;
        }
    }
    if (v.pass) v.detail = fmt("worst ratio %.4f; summands a=6..9 decrease over N=1e4,1e5,1e6", worst);
    return v;
}

verdict determinism() {
    verdict v;
    const std::vector<std::vector<std::string>> cases = {
        {"simulate", "--model", "uniform", "--N", "30", "--n", "8", "--statistic", "W", "--reps", "20000", "--seed", "7"},
        {"simulate", "--model", "geometric", "--p", "0.3", "--n", "6", "--statistic", "Y", "--r", "2", "--reps", "20000",
         "--seed", "99"},
        {"simulate", "--model", "uniform", "--N", "10", "--n", "7", "--statistic", "Z", "--A", "2", "--B", "3", "--reps",
         "20000", "--seed", "12345"},
    };
    for (const auto& base : cases) {
        std::string reference;
        for (const char* streams : {"1", "2", "3", "8"}) {
            auto args = base;
            args.insert(args.end(), {"--streams", streams});
            const auto text = cli_text(args);
            if (reference.empty()) reference = text;
            else if (text != reference) v.fail(base[2] + " output differs with " + streams + " streams");
        }
    }
    if (v.pass) v.detail = "3 simulate commands identical across 1, 2, 3, 8 streams";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<verdict()>>> criteria = {
        {"game closed forms", game_closed_forms},
        {"three-player identity", three_player_identity},
        {"oracle-formula equivalence", oracle_formula_equivalence},
        {"pair-tie bound dominance", pair_tie_dominance},
        {"strict-tie bound dominance", strict_tie_dominance},
        {"coupling identity", coupling_identity},
        {"birthday cross-check", birthday},
        {"geometric sandwich", geometric_sandwich},
        {"classical bound comparison", bhj_comparison},
        {"multivariate order of magnitude", multivariate_magnitude},
        {"simulation determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2zu %-32s %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.c_str(), secs);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
