#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gustat/bounds.hpp"
#include "gustat/exact.hpp"
#include "gustat/model.hpp"
#include "gustat/motif.hpp"
#include "gustat/rcm.hpp"
#include "gustat/stats.hpp"

namespace gustat {

struct ScheduleEntry {
    PSchedule schedule;
    Rational a_exact;  // exponent as read, for regime arithmetic
};

/// Grid of RCM runs: every schedule at every n.
struct SimulationConfig {
    std::string motif_name = "triangle";
    MotifGraph motif = cycle_graph(3);
    PointLaw law = PointLaw::uniform(2);
    Connection connection = Connection::constant(1);
    std::vector<long long> n_grid;
    std::vector<ScheduleEntry> schedules;
    long long reps = 0;
    int batches = 1;
    std::uint64_t seed = 0;
    int order = 4;
    bool exact_standardization = false;
    std::string replicates_csv = "replicates.csv";
    std::string summary_json = "summary.json";

    RcmSpec spec(long long n, const ScheduleEntry& s) const { return {n, law, connection, s.schedule}; }
};

inline SimulationConfig simulation_config_from_json(const nlohmann::json& j) {
    detail::check_schema(j);
    SimulationConfig c;
    try {
        if (j.contains("motif")) {
            if (j["motif"].is_string()) {
                c.motif_name = j["motif"].get<std::string>();
                c.motif = resolve_motif(c.motif_name);
            } else {
                c.motif = motif_from_json(j["motif"]);
                c.motif_name = "custom";
            }
        }
        if (j.contains("point_law")) c.law = point_law_from_json(j["point_law"]);
        if (j.contains("connection")) c.connection = connection_from_json(j["connection"]);
        if (!j.contains("seed")) throw ArgumentError("config must set a seed");
        c.seed = j["seed"].get<std::uint64_t>();
        c.reps = j.at("reps").get<long long>();
        c.batches = j.value("batches", 1);
        c.order = j.value("order", 4);
        c.exact_standardization = j.value("exact_standardization", false);
        c.replicates_csv = j.value("replicates_csv", c.replicates_csv);
        c.summary_json = j.value("summary_json", c.summary_json);
        const auto& ns = j.at("n");
        if (ns.is_array())
            for (const auto& n : ns) c.n_grid.push_back(n.get<long long>());
        else
            c.n_grid.push_back(ns.get<long long>());
        auto read_schedule = [](const nlohmann::json& s) {
            ScheduleEntry e;
            e.schedule.c = number_from_json(s.value("c", nlohmann::json(1)));
            const auto& a = s.value("a", nlohmann::json(0));
            e.a_exact = a.is_number() ? decimal_rational(a.get<double>()) : rational_from_json(a);
            e.schedule.a = to_double(e.a_exact);
            return e;
        };
        if (j.contains("schedules"))
            for (const auto& s : j["schedules"]) c.schedules.push_back(read_schedule(s));
        else if (j.contains("p"))
            c.schedules.push_back(read_schedule(j["p"]));
        else
            c.schedules.push_back(read_schedule(nlohmann::json::object()));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("simulation config: ") + e.what());
    }
    if (c.n_grid.empty()) throw ArgumentError("n grid is empty");
    if (c.schedules.empty()) throw ArgumentError("no p schedules");
    if (c.reps < 1 || c.batches < 1) throw ArgumentError("reps and batches must be positive");
    if (c.order < 2 || c.order > 4) throw ArgumentError("order must lie in 2..4");
    for (long long n : c.n_grid)
        if (n < c.motif.vertex_count()) throw ArgumentError("every n must be at least the motif size");
    c.law.validate();
    c.connection.validate(c.law);
    for (const auto& s : c.schedules) (void)s.schedule.at(c.n_grid.front());
    return c;
}

/// One (schedule, n) cell.
struct SummaryRow {
    int schedule = 0;
    double c = 1;
    double a = 0;
    long long n = 0;
    double p = 0;
    long long reps = 0;
    std::vector<double> cumulants;  // k-statistics 1..order
    double se_mean = 0;
    double se_variance = 0;
    std::optional<double> ks;         // pooled sample
    std::optional<double> ks_median;  // median over batches
    std::optional<double> ks_exact;   // standardized by exact mean and variance
    long long zeros = 0;
    double p_zero = 0;
    Interval p_zero_ci;
    double mean_square = 0;
    double sandwich_lower = 0;
    double sandwich_upper = 0;
    bool sandwich_holds = false;
    std::optional<double> exact_mean;
    std::string regime;
    std::string containment;
};

struct SimulationResult {
    SimulationConfig config;
    std::string assumption_one = "unchecked";
    std::vector<SummaryRow> rows;
    std::vector<std::vector<CountSample>> samples;  // parallel to rows
};

inline std::uint64_t cell_seed(std::uint64_t seed, std::size_t schedule, long long n) {
    return mix64(seed ^ mix64((static_cast<std::uint64_t>(schedule) << 40) ^ static_cast<std::uint64_t>(n)));
}

inline SummaryRow summarize(const SimulationConfig& cfg, std::size_t s, long long n, const std::vector<CountSample>& samples) {
    SummaryRow row;
    const auto& sched = cfg.schedules[s];
    row.schedule = static_cast<int>(s);
    row.c = sched.schedule.c;
    row.a = sched.schedule.a;
    row.n = n;
    row.p = sched.schedule.at(n);
    row.reps = static_cast<long long>(samples.size());
    std::vector<double> xs;
    xs.reserve(samples.size());
    long double sq = 0;
    for (const auto& x : samples) {
        xs.push_back(static_cast<double>(x.count));
        sq += static_cast<long double>(x.count) * x.count;
        if (x.count == 0) ++row.zeros;
    }
    const int order = std::min<int>(cfg.order, static_cast<int>(xs.size()) - 1);
    if (order >= 1) row.cumulants = sample_cumulants(xs, order);
    if (row.cumulants.size() >= 2) std::tie(row.se_mean, row.se_variance) = cumulant_standard_errors(row.cumulants, xs.size());
    try {
        row.ks = ks_distance_to_normal(xs);
    } catch (const DegenerateSampleError&) {
    }
    if (cfg.batches > 1) {
        std::vector<double> per_batch;
        const std::size_t len = static_cast<std::size_t>(cfg.reps);
        for (int b = 0; b < cfg.batches; ++b) {
            std::vector<double> part(xs.begin() + static_cast<long>(b * len), xs.begin() + static_cast<long>((b + 1) * len));
            try {
                per_batch.push_back(ks_distance_to_normal(part));
            } catch (const DegenerateSampleError&) {
                per_batch.push_back(1.0);
            }
        }
        row.ks_median = median(per_batch);
    } else {
        row.ks_median = row.ks;
    }
    const double r = static_cast<double>(row.reps);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= r;
    row.mean_square = static_cast<double>(sq / r);
    row.p_zero = static_cast<double>(row.zeros) / r;
    row.p_zero_ci = wilson_interval(row.zeros, row.reps);
    row.sandwich_upper = mean;
    row.sandwich_lower = row.mean_square > 0 ? mean * mean / row.mean_square : 0.0;
    const double positive = 1 - row.p_zero;
    const double slack = 1e-12;
    row.sandwich_holds = row.sandwich_lower <= positive + slack && positive <= row.sandwich_upper + slack;
    auto cls = classify_regime(cfg.motif, sched.a_exact);
    row.regime = to_string(cls.regime);
    row.containment = to_string(cls.containment);
    if (auto k = exact_kernel(cfg.spec(n, sched), cfg.motif)) {
        row.exact_mean = to_double(mean_subgraph_count(*k, n));
        if (cfg.exact_standardization) {
            auto ex = moment_expansions(k->expand(), 2);
            Rational m1 = ex[0].at(n), var = ex[1].at(n) - m1 * m1;
            if (var > 0) row.ks_exact = ks_distance_to_normal(xs, to_double(m1), std::sqrt(to_double(var)));
        }
    }
    return row;
}

// "holds" or "fails" from the exact kernel when the mark law is finite;
// continuous laws are "unchecked", except a constant connection, which is
// reported as "fails" without being refused.
inline std::string assumption_one_status(const SimulationConfig& cfg) {
    if (cfg.law.kind != PointLaw::Kind::finite)
        return cfg.connection.kind == Connection::Kind::constant ? "fails" : "unchecked";
    RcmSpec unit{cfg.motif.vertex_count(), cfg.law, cfg.connection, PSchedule{1, 0}};
    auto k = exact_kernel(unit, cfg.motif);
    if (!k) return "unchecked";
    return check_assumption_one(k->expand()) > 0 ? "holds" : "fails";
}

inline SimulationResult run_simulation(const SimulationConfig& cfg, int threads = 1) {
    SimulationResult out;
    out.config = cfg;
    out.assumption_one = assumption_one_status(cfg);
    for (std::size_t s = 0; s < cfg.schedules.size(); ++s) {
        for (long long n : cfg.n_grid) {
            auto spec = cfg.spec(n, cfg.schedules[s]);
            auto samples = run_replicates(spec, cfg.motif, cfg.reps * cfg.batches, cell_seed(cfg.seed, s, n), threads);
            out.rows.push_back(summarize(cfg, s, n, samples));
            out.samples.push_back(std::move(samples));
        }
    }
    return out;
}

/// Containment experiment: P(N_G = 0) across the grid with Wilson intervals
/// and the first/second moment sandwich.
inline SimulationResult threshold_experiment(const SimulationConfig& cfg, int threads = 1) {
    if (!is_strongly_balanced(cfg.motif)) throw ArgumentError("threshold experiment needs a strongly balanced motif");
    std::string status = assumption_one_status(cfg);
    if (status == "fails" && cfg.law.kind == PointLaw::Kind::finite)
        throw ArgumentError("the connection kernel violates the variance assumption");
    return run_simulation(cfg, threads);
}

inline nlohmann::json to_json(const SummaryRow& r) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j{{"schedule", r.schedule}, {"c", r.c},        {"a", r.a},        {"n", r.n},
                     {"p", r.p},               {"reps", r.reps},  {"cumulants", r.cumulants},
                     {"se_mean", r.se_mean},   {"se_variance", r.se_variance},
                     {"ks", opt(r.ks)},        {"ks_median", opt(r.ks_median)}, {"ks_exact", opt(r.ks_exact)},
                     {"zeros", r.zeros},       {"p_zero", r.p_zero},
                     {"p_zero_ci", {r.p_zero_ci.lo, r.p_zero_ci.hi}},
                     {"mean_square", r.mean_square},
                     {"sandwich", {{"lower", r.sandwich_lower}, {"p_positive", 1 - r.p_zero}, {"upper", r.sandwich_upper},
                                   {"holds", r.sandwich_holds}}},
                     {"exact_mean", opt(r.exact_mean)},
                     {"regime", r.regime},     {"containment", r.containment}};
    if (!r.cumulants.empty()) j["mean"] = r.cumulants[0];
    if (r.cumulants.size() >= 2) j["variance"] = r.cumulants[1];
    return j;
}

inline nlohmann::json to_json(const SimulationResult& res) {
    const auto& c = res.config;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : res.rows) rows.push_back(to_json(r));
    return {{"schema", 1},
            {"type", "simulation_summary"},
            {"motif", c.motif_name},
            {"motif_graph", motif_to_json(c.motif)},
            {"point_law", to_json(c.law)},
            {"connection", to_json(c.connection)},
            {"reps", c.reps},
            {"batches", c.batches},
            {"seed", c.seed},
            {"assumption_one", res.assumption_one},
            {"rows", rows}};
}

}  // namespace gustat
