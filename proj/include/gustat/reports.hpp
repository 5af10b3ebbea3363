#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gustat/bounds.hpp"
#include "gustat/contraction.hpp"
#include "gustat/exact.hpp"
#include "gustat/experiment.hpp"
#include "gustat/io.hpp"
#include "gustat/partition.hpp"

namespace gustat {

// ---------------------------------------------------------------------------
// partitions

inline CsvTable partitions_table(const std::vector<Partition>& parts) {
    CsvTable t;
    t.header = {"index", "blocks", "non_flat", "connected", "code", "partition"};
    long long i = 0;
    for (const auto& p : parts)
        t.rows.push_back({std::to_string(i++), std::to_string(p.block_count()), is_non_flat(p) ? "1" : "0",
                          is_connected(p) ? "1" : "0", p.code_text(), p.to_text()});
    return t;
}

inline std::vector<Partition> parse_partitions_table(const CsvTable& t, int rows, int cols) {
    const auto c = t.column("code");
    std::vector<Partition> out;
    for (const auto& r : t.rows) out.push_back(parse_partition_code(r[c], rows, cols));
    return out;
}

// ---------------------------------------------------------------------------
// diagram

inline CsvTable diagram_table(const std::vector<DiagramPoint>& points, const UpperHull& hull, int rows, const MotifGraph& g) {
    CsvTable t;
    t.header = {"x", "y", "blocks", "contracted_edges", "on_hull", "hull_vertex", "witness_code"};
    auto has = [](const std::vector<DiagramPoint>& v, const DiagramPoint& p) {
        for (const auto& q : v)
            if (q == p) return true;
        return false;
    };
    const long long jk = static_cast<long long>(rows) * g.vertex_count(), je = static_cast<long long>(rows) * g.edge_count();
    for (const auto& p : points)
        t.rows.push_back({std::to_string(p.x), std::to_string(p.y), std::to_string(jk - p.x), std::to_string(je - p.y),
                          has(hull.on_hull, p) ? "1" : "0", has(hull.vertices, p) ? "1" : "0", p.witness.code_text()});
    return t;
}

inline std::vector<DiagramPoint> parse_diagram_table(const CsvTable& t) {
    const auto cx = t.column("x"), cy = t.column("y");
    std::vector<DiagramPoint> out;
    for (const auto& r : t.rows) out.push_back({std::stoll(r[cx]), std::stoll(r[cy]), Partition()});
    return out;
}

inline CsvTable profile_table(const std::vector<CnfProfileEntry>& profile) {
    CsvTable t;
    t.header = {"r", "count", "d", "witness_code"};
    for (const auto& e : profile)
        t.rows.push_back({std::to_string(e.blocks), e.count.str(), std::to_string(e.min_edges), e.witness.code_text()});
    return t;
}

// ---------------------------------------------------------------------------
// simulation

inline CsvTable replicates_table(const SimulationResult& res) {
    CsvTable t;
    t.header = {"schedule", "c", "a", "n", "replicate_id", "count", "seed_used"};
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& row = res.rows[i];
        for (const auto& s : res.samples[i])
            t.rows.push_back({std::to_string(row.schedule), format_double(row.c), format_double(row.a), std::to_string(s.n),
                              std::to_string(s.replicate_id), std::to_string(s.count), std::to_string(s.seed_used)});
    }
    return t;
}

inline std::vector<CountSample> parse_replicates_table(const CsvTable& t) {
    const auto cn = t.column("n"), cr = t.column("replicate_id"), cc = t.column("count"), cs = t.column("seed_used");
    std::vector<CountSample> out;
    for (const auto& r : t.rows)
        out.push_back({std::stoll(r[cr]), std::stoll(r[cn]), std::stoll(r[cc]), std::stoull(r[cs])});
    return out;
}

// ---------------------------------------------------------------------------
// exact cumulants

inline nlohmann::json to_json(const CumulantReport& r) {
    nlohmann::json moments = nlohmann::json::array(), cumulants = nlohmann::json::array();
    for (const auto& m : r.moments) moments.push_back(to_string(m));
    for (const auto& c : r.cumulants) cumulants.push_back(to_string(c));
    return {{"schema", 1}, {"type", "cumulant_report"}, {"n", r.n}, {"k", r.k},
            {"order", r.order}, {"moments", moments}, {"cumulants", cumulants}};
}

inline CumulantReport cumulant_report_from_json(const nlohmann::json& j) {
    detail::check_schema(j);
    CumulantReport r;
    r.n = j.at("n").get<long long>();
    r.k = j.at("k").get<int>();
    r.order = j.at("order").get<int>();
    for (const auto& m : j.at("moments")) r.moments.push_back(rational_from_json(m));
    for (const auto& c : j.at("cumulants")) r.cumulants.push_back(rational_from_json(c));
    return r;
}

inline CsvTable cumulant_table(const CumulantReport& r) {
    CsvTable t;
    t.header = {"n", "k", "j", "moment", "cumulant", "moment_approx", "cumulant_approx"};
    for (int j = 0; j < r.order; ++j)
        t.rows.push_back({std::to_string(r.n), std::to_string(r.k), std::to_string(j + 1), to_string(r.moments[j]),
                          to_string(r.cumulants[j]), format_double(to_double(r.moments[j])),
                          format_double(to_double(r.cumulants[j]))});
    return t;
}

inline CumulantReport parse_cumulant_table(const CsvTable& t) {
    CumulantReport r;
    const auto cn = t.column("n"), ck = t.column("k"), cm = t.column("moment"), cc = t.column("cumulant");
    for (const auto& row : t.rows) {
        r.n = std::stoll(row[cn]);
        r.k = std::stoi(row[ck]);
        r.moments.push_back(parse_rational(row[cm]));
        r.cumulants.push_back(parse_rational(row[cc]));
    }
    r.order = static_cast<int>(r.moments.size());
    return r;
}

// kappa_j / kappa_2^{j/2} for j >= 3 (entries 0, 1 are 0 and 1).
inline std::vector<double> normalized_cumulants(const std::vector<double>& kappas) {
    std::vector<double> out;
    if (kappas.size() < 2 || !(kappas[1] > 0)) return out;
    out.push_back(0.0);
    out.push_back(1.0);
    for (std::size_t j = 2; j < kappas.size(); ++j) out.push_back(kappas[j] / std::pow(kappas[1], (j + 1) / 2.0));
    return out;
}

inline std::vector<double> normalized_cumulants(const std::vector<Rational>& kappas) {
    std::vector<double> d;
    for (const auto& k : kappas) d.push_back(to_double(k));
    return normalized_cumulants(d);
}

inline std::vector<int> orders_from_three(std::size_t available) {
    std::vector<int> o;
    for (int j = 3; j <= static_cast<int>(available); ++j) o.push_back(j);
    return o;
}

struct ExactRequest {
    std::optional<FiniteModelSpec> finite;
    std::optional<SubgraphKernelSpec> subgraph;
    long long n = 1;
    int order = 2;
    bool oracle = false;
    ExactOptions options;
};

inline FiniteModelSpec model_of(const ExactRequest& req) { return req.subgraph ? req.subgraph->expand() : *req.finite; }

inline ExactRequest exact_request_from_json(const nlohmann::json& j) {
    detail::check_schema(j);
    ExactRequest req;
    const std::string type = j.value("type", "finite_model");
    if (type == "finite_model") req.finite = finite_model_from_json(j);
    else if (type == "subgraph_kernel") req.subgraph = subgraph_kernel_from_json(j);
    else throw ParseError("unknown spec type '" + type + "'");
    return req;
}

/// Cumulant report with bound checks, variance facts and, optionally, the
/// brute-force comparison.
inline nlohmann::json exact_analysis(const ExactRequest& req) {
    const auto spec = model_of(req);
    auto report = exact_cumulants(spec, req.n, req.order, req.options);
    auto out = to_json(report);
    const int k = spec.k;
    const Rational sup = spec.sup_norm();

    nlohmann::json checks = nlohmann::json::array();
    bool all_hold = true;
    auto record = [&](const std::string& name, int j, const Rational& bound) {
        bool ok = rabs(report.cumulants[j - 1]) <= bound;
        all_hold = all_hold && ok;
        checks.push_back({{"bound", name}, {"j", j}, {"value", to_string(bound)}, {"approx", to_double(bound)}, {"holds", ok}});
    };
    for (int j = 1; j <= req.order; ++j) record("general", j, general_cumulant_bound(req.n, k, sup, j));
    if (req.subgraph) {
        const auto& g = req.subgraph->motif;
        bool sb = g.is_connected() && is_strongly_balanced(g);
        Regime regime = regime_at(g, req.n, req.subgraph->p);
        out["regime"] = to_string(regime);
        out["strongly_balanced"] = sb;
        for (int j = 2; j <= req.order; ++j) {
            if (j * k <= req.options.cap)
                record("subgraph", j, subgraph_cumulant_bound(g, req.n, req.subgraph->p, j, req.options.cap));
            if (sb && regime != Regime::critical) record(to_string(regime), j, regime_bound(g, req.n, req.subgraph->p, j, regime));
        }
        out["exact_mean"] = to_string(mean_subgraph_count(*req.subgraph, req.n));
    }
    out["bound_checks"] = checks;
    out["bounds_hold"] = all_hold;

    const Rational var = check_assumption_one(spec);
    out["assumption_one_variance"] = to_string(var);
    out["assumption_one"] = var > 0;
    if (var > 0) {
        auto lb = variance_lower_bound(k, sup, var);
        out["variance_threshold"] = to_string(lb.threshold);
    }
    if (req.n >= 2 * k - 1 && 2 * k <= req.options.cap) {
        auto vd = variance_decomposition(spec, req.n, req.options);
        out["variance_decomposition"] = {{"leading", to_string(vd.leading)},
                                         {"remainder", to_string(vd.remainder)},
                                         {"leading_matches_top_blocks", vd.leading_matches_top_blocks},
                                         {"remainder_from_small_blocks", vd.remainder_from_small_blocks}};
    }
    auto norm = normalized_cumulants(report.cumulants);
    if (!norm.empty()) {
        out["normalized_cumulants"] = norm;
        if (req.order >= 3) out["statulevicius"] = to_json(fit_statulevicius(norm, k, orders_from_three(norm.size())));
    }
    if (req.oracle) {
        auto brute = brute_force_moments(spec, static_cast<int>(req.n), req.order);
        out["oracle_match"] = brute == report.moments;
    }
    return out;
}

// ---------------------------------------------------------------------------
// report: merge simulation summaries and cumulant reports

inline nlohmann::json merge_reports(const std::vector<std::pair<std::string, nlohmann::json>>& inputs, CsvTable& long_form) {
    if (inputs.empty()) throw ArgumentError("report needs at least one input");
    long_form = {};
    long_form.header = {"source", "schedule", "c", "a", "n", "regime", "containment", "metric", "value"};
    nlohmann::json rows = nlohmann::json::array();
    auto emit = [&](const nlohmann::json& row, const std::string& metric, const nlohmann::json& value) {
        if (value.is_null()) return;
        auto text = [](const nlohmann::json& v) -> std::string {
            if (v.is_null()) return "";
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number()) return format_double(v.get<double>());
            return v.dump();
        };
        long_form.rows.push_back({row["source"].get<std::string>(), text(row["schedule"]), text(row["c"]), text(row["a"]),
                                  text(row["n"]), text(row["regime"]), text(row["containment"]), metric, text(value)});
    };
    for (const auto& [source, doc] : inputs) {
        detail::check_schema(doc);
        const std::string type = doc.value("type", "");
        if (type == "simulation_summary") {
            MotifGraph g = motif_from_json(doc.at("motif_graph"));
            for (const auto& r : doc.at("rows")) {
                nlohmann::json row{{"source", source}, {"type", type}, {"schedule", r.at("schedule")}, {"c", r.at("c")},
                                   {"a", r.at("a")}, {"n", r.at("n")}, {"p", r.at("p")}};
                auto cls = classify_regime(g, decimal_rational(r.at("a").get<double>()));
                row["regime"] = to_string(cls.regime);
                row["containment"] = to_string(cls.containment);
                row["ks"] = r.value("ks", nlohmann::json());
                row["ks_median"] = r.value("ks_median", nlohmann::json());
                row["p_zero"] = r.at("p_zero");
                row["mean"] = r.value("mean", nlohmann::json());
                auto ks = r.at("cumulants").get<std::vector<double>>();
                auto norm = normalized_cumulants(ks);
                if (norm.size() >= 3)
                    row["delta"] = to_json(fit_statulevicius(norm, g.vertex_count(), orders_from_three(norm.size())))["delta"];
                else
                    row["delta"] = nullptr;
                rows.push_back(row);
            }
        } else if (type == "cumulant_report") {
            nlohmann::json row{{"source", source}, {"type", type}, {"schedule", nullptr}, {"c", nullptr}, {"a", nullptr},
                               {"n", doc.at("n")}, {"regime", doc.value("regime", nlohmann::json())}, {"containment", nullptr}};
            if (doc.contains("statulevicius")) row["delta"] = doc["statulevicius"]["delta"];
            else row["delta"] = nullptr;
            row["ks"] = nullptr;
            row["ks_median"] = nullptr;
            row["p_zero"] = nullptr;
            row["mean"] = to_double(rational_from_json(doc.at("moments").at(0)));
            rows.push_back(row);
        } else {
            throw ParseError(source + ": unknown report type '" + type + "'");
        }
    }
    for (const auto& metric : {"ks", "ks_median", "p_zero", "delta"})
        for (const auto& row : rows) emit(row, metric, row[metric]);
    return {{"schema", 1}, {"type", "analysis"}, {"rows", rows}};
}

}  // namespace gustat
