#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "tiepoisson/bounds.hpp"
#include "tiepoisson/game.hpp"
#include "tiepoisson/law.hpp"
#include "tiepoisson/montecarlo.hpp"

// JSON schemas:
//   Law        {"dimension": d, "support": [[[o_1..o_d], mass], ...], "tail_error": t}
//   BoundReport{"statistic", "bound", "terms", "auxiliary", "validity_notes", "lambda"}
//   Game       {"players", "p", "p_tie", "E_R", "E_F", "breakdown", "band", ...}
//   SimResult  Law fields + {"counts", "replications", "mean", "variance", "std_error", ...}
// Support entries are ordered by outcome, so output is deterministic.

namespace tiepoisson {

using json = nlohmann::json;

inline void to_json(json& j, const Law& law) {
    json support = json::array();
    for (const auto& [o, m] : law.support) support.push_back(json::array({o, m}));
    j = json{{"dimension", law.dimension}, {"support", support}, {"tail_error", law.tail_error}};
}

inline void from_json(const json& j, Law& law) {
    law = Law(j.at("dimension").get<std::size_t>());
    for (const auto& entry : j.at("support")) law.add(entry.at(0).get<outcome>(), entry.at(1).get<double>());
    law.tail_error = j.at("tail_error").get<double>();
}

inline void to_json(json& j, const BoundReport& rep) {
    j = json{{"statistic", rep.statistic}, {"bound", rep.bound_value},         {"terms", rep.terms},
             {"auxiliary", rep.auxiliary}, {"validity_notes", rep.validity_notes}, {"lambda", rep.lambda}};
}

inline void from_json(const json& j, BoundReport& rep) {
    j.at("statistic").get_to(rep.statistic);
    j.at("bound").get_to(rep.bound_value);
    j.at("terms").get_to(rep.terms);
    j.at("auxiliary").get_to(rep.auxiliary);
    j.at("validity_notes").get_to(rep.validity_notes);
    j.at("lambda").get_to(rep.lambda);
}

inline void to_json(json& j, const interval& iv) { j = json::array({iv.lo, iv.hi}); }
inline void from_json(const json& j, interval& iv) {
    iv.lo = j.at(0).get<double>();
    iv.hi = j.at(1).get<double>();
}

inline void to_json(json& j, const GameAnalytics& g) {
    j = json{{"players", g.players}, {"p", g.p},     {"p_tie", g.p_tie}, {"E_R", g.expected_rounds},
             {"E_F", g.expected_flips}, {"breakdown", g.breakdown}, {"approximation_error", g.approximation_error}};
    if (g.p_tie_band) j["band"] = *g.p_tie_band;
    if (g.rounds_band) j["E_R_band"] = *g.rounds_band;
    if (g.flips_band) j["E_F_band"] = *g.flips_band;
}

inline void from_json(const json& j, GameAnalytics& g) {
    j.at("players").get_to(g.players);
    j.at("p").get_to(g.p);
    j.at("p_tie").get_to(g.p_tie);
    j.at("E_R").get_to(g.expected_rounds);
    j.at("E_F").get_to(g.expected_flips);
    j.at("breakdown").get_to(g.breakdown);
    j.at("approximation_error").get_to(g.approximation_error);
    if (j.contains("band")) g.p_tie_band = j.at("band").get<interval>();
    if (j.contains("E_R_band")) g.rounds_band = j.at("E_R_band").get<interval>();
    if (j.contains("E_F_band")) g.flips_band = j.at("E_F_band").get<interval>();
}

inline void to_json(json& j, const SimResult& res) {
    j = json(res.empirical_law);
    json counts = json::array();
    for (const auto& [o, c] : res.counts) counts.push_back(json::array({o, c}));
    j["counts"] = counts;
    j["replications"] = res.replications;
    j["mean"] = res.statistic_mean;
    j["variance"] = res.statistic_variance;
    j["std_error"] = res.std_error_mean;
    j["coordinate_means"] = res.coordinate_means;
    j["coordinate_std_errors"] = res.coordinate_std_errors;
}

inline void from_json(const json& j, SimResult& res) {
    res.empirical_law = j.get<Law>();
    res.counts.clear();
    for (const auto& entry : j.at("counts")) res.counts[entry.at(0).get<outcome>()] = entry.at(1).get<std::uint64_t>();
    j.at("replications").get_to(res.replications);
    j.at("mean").get_to(res.statistic_mean);
    j.at("variance").get_to(res.statistic_variance);
    j.at("std_error").get_to(res.std_error_mean);
    j.at("coordinate_means").get_to(res.coordinate_means);
    j.at("coordinate_std_errors").get_to(res.coordinate_std_errors);
}

/// Float formatting for CSV output: 12 significant digits.
inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace tiepoisson
