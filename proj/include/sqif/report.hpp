#pragma once

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "factor.hpp"

namespace sqif {

// Distances print with 12 significant digits; big integers always as
// decimal strings.
inline std::string format_real(real_t x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return buf;
}

inline std::string to_decimal(const mpz_class& z) { return z.get_str(10); }

struct run_report {
    std::string command;
    std::string input;  // n, decimal
    factor_outcome outcome;
    double wall_ms = 0;
    std::map<std::string, std::string> config;
};

inline nlohmann::json to_json(const round_record& r) {
    nlohmann::json j;
    j["branch"] = r.branch;
    j["target"] = format_real(r.target);
    j["squarings"] = r.squarings;
    j["t_bound"] = r.t_bound;
    j["walk_steps"] = r.walk_steps;
    j["psi_budget"] = r.psi_budget;
    j["dbar"] = format_real(r.dbar);
    j["approx_dist"] = format_real(r.approx_dist);
    j["endpoint_seen"] = r.endpoint_seen;
    j["degenerate"] = r.degenerate;
    std::vector<std::string> ds;
    for (real_t d : r.giant_distances) ds.push_back(format_real(d));
    j["giant_distances"] = ds;
    return j;
}

inline nlohmann::json to_json(const run_report& rep) {
    nlohmann::json j;
    j["command"] = rep.command;
    j["n"] = rep.input;
    j["outcome"] = rep.outcome.kind == outcome_kind::factor_found ? "factor" : "inapplicable";
    j["divisor"] = rep.outcome.kind == outcome_kind::factor_found
                       ? to_decimal(rep.outcome.divisor)
                       : std::string{};
    const factor_trace& t = rep.outcome.trace;
    nlohmann::json jt;
    jt["algorithm"] = t.algorithm;
    jt["iterations"] = t.iterations;
    jt["halving_rounds"] = t.halving_rounds;
    jt["regulator"] = format_real(t.regulator);
    jt["regulator_source"] =
        t.regulator_source == regulator_kind::exact_traversal ? "traversal" : "external";
    jt["rounds"] = nlohmann::json::array();
    for (const auto& r : t.rounds) jt["rounds"].push_back(to_json(r));
    j["trace"] = jt;
    j["wall_ms"] = rep.wall_ms;
    j["config"] = rep.config;
    return j;
}

// Inverse of to_json over the outcome fields; used to verify that emitted
// reports round-trip exactly.
inline run_report report_from_json(const nlohmann::json& j) {
    run_report rep;
    rep.command = j.at("command").get<std::string>();
    rep.input = j.at("n").get<std::string>();
    rep.outcome.kind = j.at("outcome").get<std::string>() == "factor"
                           ? outcome_kind::factor_found
                           : outcome_kind::inapplicable;
    if (rep.outcome.kind == outcome_kind::factor_found)
        rep.outcome.divisor = mpz_class(j.at("divisor").get<std::string>());
    const auto& jt = j.at("trace");
    factor_trace& t = rep.outcome.trace;
    t.algorithm = jt.at("algorithm").get<std::string>();
    t.iterations = jt.at("iterations").get<std::uint64_t>();
    t.halving_rounds = jt.at("halving_rounds").get<unsigned>();
    t.regulator = std::strtold(jt.at("regulator").get<std::string>().c_str(), nullptr);
    t.regulator_source = jt.at("regulator_source").get<std::string>() == "traversal"
                             ? regulator_kind::exact_traversal
                             : regulator_kind::external_multiple;
    for (const auto& jr : jt.at("rounds")) {
        round_record r;
        r.branch = jr.at("branch").get<int>();
        r.target = std::strtold(jr.at("target").get<std::string>().c_str(), nullptr);
        r.squarings = jr.at("squarings").get<std::uint64_t>();
        r.t_bound = jr.at("t_bound").get<std::uint64_t>();
        r.walk_steps = jr.at("walk_steps").get<std::uint64_t>();
        r.psi_budget = jr.at("psi_budget").get<std::uint64_t>();
        r.dbar = std::strtold(jr.at("dbar").get<std::string>().c_str(), nullptr);
        r.approx_dist = std::strtold(jr.at("approx_dist").get<std::string>().c_str(), nullptr);
        r.endpoint_seen = jr.at("endpoint_seen").get<bool>();
        r.degenerate = jr.at("degenerate").get<bool>();
        for (const auto& d : jr.at("giant_distances"))
            r.giant_distances.push_back(std::strtold(d.get<std::string>().c_str(), nullptr));
        t.rounds.push_back(std::move(r));
    }
    rep.wall_ms = j.at("wall_ms").get<double>();
    for (auto it = j.at("config").begin(); it != j.at("config").end(); ++it)
        rep.config[it.key()] = it.value().get<std::string>();
    return rep;
}

}  // namespace sqif
