#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tiepoisson/bounds.hpp"
#include "tiepoisson/distributions.hpp"
#include "tiepoisson/error.hpp"
#include "tiepoisson/exact_oracle.hpp"
#include "tiepoisson/game.hpp"
#include "tiepoisson/json_io.hpp"
#include "tiepoisson/montecarlo.hpp"
#include "tiepoisson/poisson.hpp"

// Command-line front end. Exit codes: 0 ok, 2 usage, 3 validation, 4 resource.
// Output is assembled in memory and written only on success.

namespace tiepoisson::cli {

enum exit_code : int { ok = 0, usage = 2, validation = 3, resource = 4 };

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct model_flags {
    std::string model = "uniform";
    std::int64_t N = 0;
    double p = 0.0;
    std::string masses;
    double tail_tolerance = 1e-12;
    std::int64_t n = 0;
};

struct statistic_flags {
    std::string statistic = "W";
    std::int64_t r = 2;
    std::int64_t A = 2;
    std::int64_t B = 3;
};

inline void add_model_flags(CLI::App* cmd, model_flags& m) {
    cmd->add_option("--model", m.model, "uniform | geometric | explicit")
        ->check(CLI::IsMember({"uniform", "geometric", "explicit"}));
    cmd->add_option("--N", m.N, "number of boxes (uniform model)");
    cmd->add_option("--p", m.p, "success probability (geometric model)");
    cmd->add_option("--masses", m.masses, "comma-separated masses on 1..k (explicit model)");
    cmd->add_option("--tail-tolerance", m.tail_tolerance, "geometric truncation tolerance");
    cmd->add_option("--n", m.n, "number of players / balls")->required();
}

inline void add_statistic_flags(CLI::App* cmd, statistic_flags& s) {
    cmd->add_option("--statistic", s.statistic, "W | Y | Z")->check(CLI::IsMember({"W", "Y", "Z"}));
    cmd->add_option("--r", s.r, "tie order for Y");
    cmd->add_option("--A", s.A, "first order for Z");
    cmd->add_option("--B", s.B, "last order for Z");
}

inline std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw validation_error("not a number: '" + item + "'");
        }
    }
    return out;
}

inline DiscretePMF build_pmf(const model_flags& m) {
    if (m.model == "uniform") {
        if (m.N <= 0) throw usage_error("--model uniform requires --N");
        return DiscretePMF::uniform(m.N);
    }
    if (m.model == "geometric") {
        if (m.p == 0.0) throw usage_error("--model geometric requires --p");
        return DiscretePMF::geometric(m.p, m.tail_tolerance);
    }
    if (m.masses.empty()) throw usage_error("--model explicit requires --masses");
    return DiscretePMF::from_masses(parse_number_list(m.masses));
}

inline statistic_spec build_statistic(const statistic_flags& s) {
    if (s.statistic == "W") return statistic_spec::pair_ties();
    if (s.statistic == "Y") return statistic_spec::strict_ties(s.r);
    return statistic_spec::strict_tie_vector(s.A, s.B);
}

inline std::uint64_t enumeration_budget() {
    if (const char* env = std::getenv("TIE_POISSON_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw validation_error("TIE_POISSON_BUDGET is not a positive integer");
        }
    }
    return default_enumeration_budget;
}

inline Law exact_law_of(const Instance& inst, const statistic_spec& stat, const exact_options& opts) {
    switch (stat.kind) {
        case statistic_kind::W:
            return exact_law_W(inst, opts);
        case statistic_kind::Y:
            return exact_law_Yr(inst, stat.r, opts);
        case statistic_kind::Z:
            return exact_joint_law(inst, stat.A, stat.B, opts);
    }
    return {};
}

/// Poisson reference law with the mean(s) the bounds certify.
inline Law poisson_reference(const Instance& inst, const statistic_spec& stat) {
    switch (stat.kind) {
        case statistic_kind::W:
            return poisson_law(lambda_W(inst));
        case statistic_kind::Y:
            return poisson_law(lambda_r(inst, stat.r));
        case statistic_kind::Z: {
            PoissonSpec spec;
            for (auto a = stat.A; a <= stat.B; ++a) spec.means.push_back(lambda_r(inst, a));
            return product_poisson_law(spec);
        }
    }
    return {};
}

/// The headline bound for an instance: pair-tie bound, the specialized
/// Y_r bound for uniform/geometric (general form for explicit pmfs or when
/// `general` is set), and the multivariate bound (uniform only).
inline BoundReport bound_for(const Instance& inst, const statistic_spec& stat, bool general = false) {
    switch (stat.kind) {
        case statistic_kind::W:
            return tv_bound_W(inst);
        case statistic_kind::Y:
            if (general || inst.pmf.kind() == pmf_kind::explicit_masses) return tv_bound_Yr_general(inst, stat.r);
            if (inst.pmf.kind() == pmf_kind::uniform) return tv_bound_Yr_uniform(inst.pmf.boxes(), inst.n, stat.r);
            return tv_bound_Yr_geometric(inst.pmf.p(), inst.n, stat.r);
        case statistic_kind::Z:
            if (inst.pmf.kind() != pmf_kind::uniform)
                throw usage_error("the multivariate bound is restricted to the uniform model");
            return tv_bound_multivariate(inst.pmf.boxes(), inst.n, stat.A, stat.B);
    }
    return {};
}

inline std::string statistic_label(const statistic_spec& s) {
    switch (s.kind) {
        case statistic_kind::W:
            return "W";
        case statistic_kind::Y:
            return "Y" + std::to_string(s.r);
        case statistic_kind::Z:
            return "Z" + std::to_string(s.A) + "-" + std::to_string(s.B);
    }
    return {};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- game

struct game_flags {
    std::int64_t players = 2;
    double p = 0.5;
    bool approx = false;
    std::uint64_t simulate = 0;
    std::uint64_t seed = 1;
};

inline std::string cmd_game(const game_flags& f) {
    if (f.players < 2) throw validation_error("--players must be >= 2");
    GameAnalytics g;
    if (f.approx)
        g = n_player_approx(f.players, f.p);
    else if (f.players == 2)
        g = two_player(f.p);
    else if (f.players == 3)
        g = three_player(f.p);
    else
        throw usage_error("exact closed forms exist only for 2 or 3 players; pass --approx for n >= 4");
    json j = g;
    if (f.simulate > 0) {
        std::uint64_t ties = 0;
        double flips = 0.0;
        for (std::uint64_t i = 0; i < f.simulate; ++i) {
            const auto rec = simulate_round(f.players, f.p, f.seed, i);
            ties += rec.game_over ? 0 : 1;
            for (auto x : rec.flips) flips += static_cast<double>(x);
        }
        const double reps = static_cast<double>(f.simulate);
        const double freq = static_cast<double>(ties) / reps;
        const double sigma = std::sqrt(std::max(g.p_tie * (1.0 - g.p_tie), 1e-300) / reps);
        bool pass = std::abs(freq - g.p_tie) <= 3.0 * sigma;
        if (g.p_tie_band) pass = freq >= g.p_tie_band->lo - 3.0 * sigma && freq <= g.p_tie_band->hi + 3.0 * sigma;
        j["simulation"] = json{{"rounds", f.simulate},
                               {"seed", f.seed},
                               {"tie_frequency", freq},
                               {"sigma", sigma},
                               {"mean_flips_per_round", flips / reps},
                               {"expected_flips_per_round", static_cast<double>(f.players) / f.p},
                               {"pass_3sigma", pass}};
    }
    return dump(j);
}

// ---------------------------------------------------------------- bound

struct bound_flags {
    model_flags model;
    statistic_flags stat;
    bool compare_bhj = false;
    bool general = false;
    bool with_exact = false;
    std::string format = "json";
};

inline std::string bound_csv(const Instance& inst, const statistic_spec& stat, const BoundReport& rep,
                             std::optional<double> exact) {
    std::ostringstream os;
    os << "N,p,n,r,lambda,bound,exact_tv";
    for (const auto& [name, v] : rep.terms) os << ",term:" << name;
    os << "\n";
    const bool uniform = inst.pmf.kind() == pmf_kind::uniform;
    const bool geometric = inst.pmf.kind() == pmf_kind::geometric;
    os << (uniform ? std::to_string(inst.pmf.boxes()) : "") << "," << (geometric ? csv_number(inst.pmf.p()) : "") << ","
       << inst.n << ",";
    if (stat.kind == statistic_kind::Y) os << stat.r;
    if (stat.kind == statistic_kind::Z) os << stat.A << "-" << stat.B;
    os << ",";
    for (std::size_t i = 0; i < rep.lambda.size(); ++i) os << (i ? ";" : "") << csv_number(rep.lambda[i]);
    os << "," << csv_number(rep.bound_value) << "," << (exact ? csv_number(*exact) : "");
    for (const auto& [name, v] : rep.terms) os << "," << csv_number(v);
    os << "\n";
    return os.str();
}

inline std::string cmd_bound(const bound_flags& f, std::uint64_t budget) {
    const Instance inst(f.model.n, build_pmf(f.model));
    const auto stat = build_statistic(f.stat);
    const auto rep = bound_for(inst, stat, f.general);
    std::optional<double> exact;
    if (f.with_exact) exact = exact_tv(exact_law_of(inst, stat, {budget}), poisson_reference(inst, stat)).value;
    if (f.format == "csv") return bound_csv(inst, stat, rep, exact);
    json j = rep;
    if (exact) j["exact_tv"] = *exact;
    if (f.compare_bhj) {
        if (inst.pmf.kind() != pmf_kind::uniform || stat.kind != statistic_kind::Y)
            throw usage_error("--compare-bhj applies to --model uniform --statistic Y");
        const auto cross = bhj_crossover(inst.pmf.boxes(), inst.n, stat.r);
        j["bhj_bound"] = bhj_bound_uniform(inst.pmf.boxes(), inst.n, stat.r);
        j["crossover"] = json{{"lhs", cross.lhs}, {"rhs", cross.rhs}, {"holds", cross.holds()}};
    }
    return dump(j);
}

// ---------------------------------------------------------------- exact

struct exact_flags {
    model_flags model;
    statistic_flags stat;
    std::string route = "auto";
    std::string format = "json";
};

inline std::string cmd_exact(const exact_flags& f, std::uint64_t budget) {
    const Instance inst(f.model.n, build_pmf(f.model));
    exact_options opts{budget};
    if (f.route == "dp") opts.route = enumeration_route::box_dp;
    if (f.route == "composition") opts.route = enumeration_route::composition;
    if (f.route == "partition") {
        if (inst.pmf.kind() != pmf_kind::uniform) throw usage_error("--route partition requires --model uniform");
        opts.route = enumeration_route::partition;
    }
    const auto law = exact_law_of(inst, build_statistic(f.stat), opts);
    if (f.format == "csv") {
        std::ostringstream os;
        os << "outcome,mass\n";
        for (const auto& [o, m] : law.support) {
            for (std::size_t i = 0; i < o.size(); ++i) os << (i ? ";" : "") << o[i];
            os << "," << csv_number(m) << "\n";
        }
        return os.str();
    }
    return dump(json(law));
}

// ---------------------------------------------------------------- simulate

struct simulate_flags {
    model_flags model;
    statistic_flags stat;
    std::uint64_t reps = 100000;
    std::uint64_t seed = 1;
    unsigned streams = 1;
    bool with_tv = false;
};

inline std::string cmd_simulate(const simulate_flags& f) {
    const Instance inst(f.model.n, build_pmf(f.model));
    const auto stat = build_statistic(f.stat);
    const auto res = run(SimConfig{inst, stat, f.reps, f.seed, f.streams});
    json j = res;
    if (f.with_tv) {
        const auto tv = empirical_tv(res, poisson_reference(inst, stat));
        j["empirical_tv"] = json{{"estimate", tv.estimate}, {"std_error", tv.std_error}};
    }
    return dump(j);
}

// ---------------------------------------------------------------- compare

struct grid_row {
    std::string model;  // uniform | geometric
    std::int64_t N = 0;
    double p = 0.0;
    std::int64_t n = 0;
    statistic_spec stat;
};

namespace detail {

inline std::vector<std::int64_t> parse_int_range(const std::string& text) {
    // "2..20" or "2,3,5"
    std::vector<std::int64_t> out;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const auto lo = std::stoll(text.substr(0, dots));
        const auto hi = std::stoll(text.substr(dots + 2));
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    for (double v : parse_number_list(text)) out.push_back(static_cast<std::int64_t>(v));
    return out;
}

inline std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace detail

/// Built-in grids matching the dominance experiments.
inline std::vector<grid_row> named_grid(const std::string& name) {
    std::vector<grid_row> rows;
    if (name == "small-uniform") {
        for (std::int64_t N = 2; N <= 20; ++N)
            for (std::int64_t n = 2; n <= 6; ++n) rows.push_back({"uniform", N, 0.0, n, statistic_spec::pair_ties()});
        for (std::int64_t N = 2; N <= 12; ++N)
            for (std::int64_t n = 4; n <= 6; ++n)
                for (std::int64_t r : {2, 3})
                    if (n >= 2 * r) rows.push_back({"uniform", N, 0.0, n, statistic_spec::strict_ties(r)});
    } else if (name == "small-geometric") {
        for (double p : {0.2, 0.3})
            for (std::int64_t n = 2; n <= 5; ++n) rows.push_back({"geometric", 0, p, n, statistic_spec::pair_ties()});
        for (double p : {0.2, 0.3})
            for (std::int64_t n = 4; n <= 6; ++n) rows.push_back({"geometric", 0, p, n, statistic_spec::strict_ties(2)});
    } else if (name == "small-multivariate") {
        for (std::int64_t N = 2; N <= 10; ++N)
            for (std::int64_t n = 3; n <= 6; ++n)
                rows.push_back({"uniform", N, 0.0, n, statistic_spec::strict_tie_vector(2, 3)});
    } else {
        throw usage_error("unknown grid '" + name + "' (small-uniform | small-geometric | small-multivariate)");
    }
    return rows;
}

/// Grid from key=value config: model, N, p, n, statistic, r, A, B.
/// Integer keys accept "lo..hi" or comma lists.
inline std::vector<grid_row> config_grid(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& k, const std::string& def) {
        auto it = kv.find(k);
        return it == kv.end() ? def : it->second;
    };
    const std::string model = get("model", "uniform");
    if (model != "uniform" && model != "geometric") throw validation_error("config: model must be uniform or geometric");
    const std::string stat = get("statistic", "W");
    std::vector<grid_row> rows;
    const auto ns = detail::parse_int_range(get("n", "2..6"));
    const auto rs = detail::parse_int_range(get("r", "2"));
    const auto A = std::stoll(get("A", "2"));
    const auto B = std::stoll(get("B", "3"));
    std::vector<std::int64_t> Ns{0};
    std::vector<double> ps{0.0};
    if (model == "uniform")
        Ns = detail::parse_int_range(get("N", "2..12"));
    else
        ps = parse_number_list(get("p", "0.2,0.3"));
    for (auto N : Ns)
        for (double p : ps)
            for (auto n : ns) {
                if (stat == "W") rows.push_back({model, N, p, n, statistic_spec::pair_ties()});
                else if (stat == "Y")
                    for (auto r : rs) {
                        if (n >= 2 * r) rows.push_back({model, N, p, n, statistic_spec::strict_ties(r)});
                    }
                else if (stat == "Z") {
                    if (B <= n) rows.push_back({model, N, p, n, statistic_spec::strict_tie_vector(A, B)});
                } else
                    throw validation_error("config: statistic must be W, Y or Z");
            }
    return rows;
}

struct compare_flags {
    std::string grid = "small-uniform";
    std::string config;
    std::optional<std::uint64_t> reps;
    std::optional<std::uint64_t> seed;
    unsigned streams = 1;
};

inline std::string cmd_compare(const compare_flags& f, std::uint64_t budget) {
    std::vector<grid_row> rows;
    std::uint64_t reps = 0;
    std::uint64_t seed = 1;
    if (!f.config.empty()) {
        const auto kv = detail::read_config(f.config);
        rows = config_grid(kv);
        if (kv.contains("reps")) reps = std::stoull(kv.at("reps"));
        if (kv.contains("seed")) seed = std::stoull(kv.at("seed"));
    } else {
        rows = named_grid(f.grid);
    }
    if (f.reps) reps = *f.reps;
    if (f.seed) seed = *f.seed;
    std::ostringstream os;
    os << "instance,lambda,exact_tv,bound,empirical_tv,ratio\n";
    for (const auto& row : rows) {
        const DiscretePMF pmf = row.model == "uniform" ? DiscretePMF::uniform(row.N) : DiscretePMF::geometric(row.p);
        const Instance inst(row.n, pmf);
        const auto ref = poisson_reference(inst, row.stat);
        const double tv = exact_tv(exact_law_of(inst, row.stat, {budget}), ref).value;
        const auto rep = bound_for(inst, row.stat);
        std::string label = row.model == "uniform" ? "uniform:N=" + std::to_string(row.N) : "geometric:p=" + csv_number(row.p);
        label += ":n=" + std::to_string(row.n) + ":" + statistic_label(row.stat);
        os << label << ",";
        for (std::size_t i = 0; i < rep.lambda.size(); ++i) os << (i ? ";" : "") << csv_number(rep.lambda[i]);
        os << "," << csv_number(tv) << "," << csv_number(rep.bound_value) << ",";
        if (reps > 0) {
            const auto res = run(SimConfig{inst, row.stat, reps, seed, f.streams});
            os << csv_number(empirical_tv(res, ref).estimate);
        }
        os << "," << csv_number(rep.bound_value > 0.0 ? tv / rep.bound_value : 0.0) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------- window

struct window_flags {
    std::int64_t N = 0;
    std::int64_t n = 0;
    std::string n_rule;
    double alpha = 0.9;
    double threshold = 1.0;
    double target = 0.1;
};

inline std::int64_t apply_n_rule(const std::string& rule, std::int64_t N, double alpha) {
    const double Nd = static_cast<double>(N);
    if (rule == "N/logN") return std::llround(Nd / std::log(Nd));
    if (rule == "N^alpha") return std::llround(std::pow(Nd, alpha));
    if (rule.rfind("N^", 0) == 0) return std::llround(std::pow(Nd, parse_number_list(rule.substr(2)).at(0)));
    if (rule == "sqrt(NlogN)") return std::llround(std::sqrt(Nd * std::log(Nd)));
    throw usage_error("unknown --n-rule '" + rule + "' (N/logN | N^alpha | N^<x> | sqrt(NlogN))");
}

inline std::string cmd_window(const window_flags& f) {
    if (f.N < 2) throw validation_error("--N must be >= 2");
    std::int64_t n = f.n;
    if (!f.n_rule.empty()) n = apply_n_rule(f.n_rule, f.N, f.alpha);
    if (n <= 0) throw usage_error("window requires --n or --n-rule");
    const auto res = regime_window(f.N, n, {f.threshold, f.target});
    json j{{"N", f.N},
           {"n", n},
           {"found", res.found},
           {"A", res.A},
           {"B", res.B},
           {"diagnostic", res.diagnostic},
           {"analytic", {{"A", res.analytic_A}, {"B", res.analytic_B}, {"n_is_N_over_logN", res.n_is_N_over_logN}}}};
    if (res.report) j["report"] = *res.report;
    return dump(j);
}

// ---------------------------------------------------------------- driver

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tie statistics, Poisson approximations and total-variation bounds"};
    app.require_subcommand(1);
    std::string output_path;
    app.add_option("-o,--output", output_path, "write output to this file instead of stdout");

    game_flags gf;
    auto* game = app.add_subcommand("game", "coin-flip elimination game analytics");
    game->add_option("--players", gf.players, "number of players")->required();
    game->add_option("--p", gf.p, "heads probability")->required();
    game->add_flag("--approx", gf.approx, "Poisson approximation for n players");
    game->add_option("--simulate", gf.simulate, "Monte Carlo rounds for a cross-check");
    game->add_option("--seed", gf.seed, "simulation seed");

    bound_flags bf;
    auto* bound = app.add_subcommand("bound", "total-variation bound with term breakdown");
    add_model_flags(bound, bf.model);
    add_statistic_flags(bound, bf.stat);
    bound->add_flag("--compare-bhj", bf.compare_bhj, "add the classical uniform bound and crossover predicate");
    bound->add_flag("--general", bf.general, "use the general-pmf form for Y");
    bound->add_flag("--with-exact", bf.with_exact, "add the exact TV distance (small instances)");
    bound->add_option("--format", bf.format)->check(CLI::IsMember({"json", "csv"}));

    exact_flags ef;
    auto* exact = app.add_subcommand("exact", "exact law by enumeration");
    add_model_flags(exact, ef.model);
    add_statistic_flags(exact, ef.stat);
    exact->add_option("--route", ef.route)->check(CLI::IsMember({"auto", "dp", "composition", "partition"}));
    exact->add_option("--format", ef.format)->check(CLI::IsMember({"json", "csv"}));

    simulate_flags sf;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo law of a statistic");
    add_model_flags(simulate, sf.model);
    add_statistic_flags(simulate, sf.stat);
    simulate->add_option("--reps", sf.reps, "replications");
    simulate->add_option("--seed", sf.seed, "64-bit seed");
    simulate->add_option("--streams", sf.streams, "parallel streams (results do not depend on it)");
    simulate->add_flag("--with-tv", sf.with_tv, "add empirical TV against the Poisson reference");

    compare_flags cf;
    auto* compare = app.add_subcommand("compare", "exact TV vs bound (vs empirical TV) over a grid, CSV");
    compare->add_option("--grid", cf.grid, "small-uniform | small-geometric | small-multivariate");
    compare->add_option("--config", cf.config, "key=value grid file (overrides --grid)");
    compare->add_option("--reps", cf.reps, "Monte Carlo replications per row (0 = skip)");
    compare->add_option("--seed", cf.seed);
    compare->add_option("--streams", cf.streams);

    window_flags wf;
    auto* window = app.add_subcommand("window", "search a multivariate approximation window [A,B]");
    window->add_option("--N", wf.N)->required();
    window->add_option("--n", wf.n);
    window->add_option("--n-rule", wf.n_rule, "N/logN | N^alpha | sqrt(NlogN)");
    window->add_option("--alpha", wf.alpha);
    window->add_option("--threshold", wf.threshold, "minimum lambda_B");
    window->add_option("--target", wf.target, "maximum bound");

    std::vector<std::string> argv_store{"tie_poisson"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    }

    std::string text;
    try {
        const auto budget = enumeration_budget();
        if (game->parsed()) text = cmd_game(gf);
        else if (bound->parsed()) text = cmd_bound(bf, budget);
        else if (exact->parsed()) text = cmd_exact(ef, budget);
        else if (simulate->parsed()) text = cmd_simulate(sf);
        else if (compare->parsed()) text = cmd_compare(cf, budget);
        else if (window->parsed()) text = cmd_window(wf);
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << "\n";
        return resource;
    } catch (const std::logic_error& e) {  // validation_error, domain_error
        err << "validation error: " << e.what() << "\n";
        return validation;
    }

    if (output_path.empty()) {
        out << text;
    } else {
        std::ofstream file(output_path);
        if (!file) {
            err << "validation error: cannot write '" << output_path << "'\n";
            return validation;
        }
        file << text;
    }
    return ok;
}

}  // namespace tiepoisson::cli
