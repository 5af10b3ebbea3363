// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "gustat/gustat.hpp"
#include "oracles.hpp"

using namespace gustat;
using Clock = std::chrono::steady_clock;
using PointSet = std::set<std::pair<long long, long long>>;

namespace {

const std::string kConfigs = GUSTAT_CONFIGS;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

PointSet as_set(const std::vector<DiagramPoint>& pts) {
    PointSet s;
    for (const auto& p : pts) s.insert({p.x, p.y});
    return s;
}

std::vector<Rational> exact_kappas(const FiniteModelSpec& s, long long n, int order) {
    return moments_to_cumulants(moments_at(moment_expansions(s, order), n));
}

SubgraphKernelSpec two_mark(const MotifGraph& g, const Rational& p) {
    SubgraphKernelSpec s;
    s.motif = g;
    s.vertex_labels = {"core", "fringe"};
    s.vertex_probs = {make_rational(1, 3), make_rational(2, 3)};
    s.connection = {{Rational(1), make_rational(1, 2)}, {make_rational(1, 2), make_rational(1, 4)}};
    s.p = p;
    return s;
}

// Var[sum_l f_(l)(X_1)] straight from the table: each marginal averages every
// other vertex coordinate and every edge coordinate.
Rational marginal_sum_variance(const FiniteModelSpec& s) {
    const int k = s.k, vm = s.vertex_space_size(), em = s.edge_space_size(), slots = s.edge_slots();
    std::vector<std::vector<Rational>> fl(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(vm)));
    std::vector<int> x(static_cast<std::size_t>(k), 0), y(static_cast<std::size_t>(slots), 0);
    std::function<void(int)> walk = [&](int pos) {
        if (pos < k + slots) {
            const int base = pos < k ? vm : em;
            for (int d = 0; d < base; ++d) {
                (pos < k ? x[pos] : y[pos - k]) = d;
                walk(pos + 1);
            }
            return;
        }
        Rational w = 1;
        for (int e : y) w *= s.edge_probs[e];
        for (int l = 0; l < k; ++l) {
            Rational wl = w;
            for (int i = 0; i < k; ++i)
                if (i != l) wl *= s.vertex_probs[x[i]];
            fl[l][x[l]] += wl * s(x, y);
        }
    };
    walk(0);
    Rational m1 = 0, m2 = 0;
    for (int v = 0; v < vm; ++v) {
        Rational g = 0;
        for (int l = 0; l < k; ++l) g += fl[l][v];
        m1 += s.vertex_probs[v] * g;
        m2 += s.vertex_probs[v] * g * g;
    }
    return m2 - m1 * m1;
}

Outcome diagrams() {
    auto t0 = Clock::now();
    auto g = cycle_graph(3);
    bool ok = as_set(sigma_diagram(g, 2)) == PointSet{{3, 3}, {2, 1}, {1, 0}};
    ok = ok && as_set(sigma_diagram(g, 3)) == PointSet{{6, 6}, {5, 4}, {4, 3}, {5, 3}, {4, 2}, {4, 1}, {3, 1}, {3, 0}, {2, 0}};
    ok = ok && as_set(sigma_diagram(g, 4)) ==
                   PointSet{{9, 9}, {8, 7}, {7, 6}, {8, 6}, {7, 5}, {7, 4}, {6, 4}, {6, 3}, {5, 3}, {7, 3},
                            {6, 2}, {5, 2}, {7, 2}, {6, 1}, {5, 1}, {4, 1}, {6, 0}, {5, 0}, {4, 0}, {3, 0}};
    ok = ok && as_set(upper_hull(sigma_diagram(g, 3)).on_hull) == PointSet{{6, 6}, {4, 3}, {2, 0}};
    ok = ok && as_set(upper_hull(sigma_diagram(g, 4)).on_hull) == PointSet{{9, 9}, {7, 6}, {5, 3}, {3, 0}};
    double t = seconds_since(t0);
    return {ok && t < 60, "sets and hull intersections for j=2,3,4 in " + std::to_string(t) + "s"};
}

Outcome contraction() {
    auto rho = parse_partition_text("{(1,1)(2,1)}{(1,2)(3,2)}{(1,3)(3,3)}{(2,3)}{(2,2)(3,1)}", 3, 3);
    auto c = contract(rho, cycle_graph(3));
    std::vector<GridCell> reps{{1, 1}, {1, 2}, {1, 3}, {2, 3}, {2, 2}};
    auto id = [&](int label) { return rho.block_of(reps[label - 1]); };
    std::set<std::pair<int, int>> expected;
    for (auto [a, b] : {std::pair{1, 2}, {1, 3}, {2, 3}, {1, 5}, {1, 4}, {4, 5}, {2, 5}, {3, 5}})
        expected.insert({std::min(id(a), id(b)), std::max(id(a), id(b))});
    std::set<std::pair<int, int>> got(c.simple_edges.begin(), c.simple_edges.end());
    bool ok = c.vertex_count() == 5 && c.edge_count() == 8 && got == expected;
    return {ok, std::to_string(c.vertex_count()) + " blocks, " + std::to_string(c.edge_count()) + " edges"};
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(20240917);
    int specs = 0, mismatches = 0;
    for (int t = 0; t < 30; ++t) {
        auto s = oracle::random_spec(rng, 2, 2 + t % 2, 1 + t % 3);
        for (int n = 1; n <= 4; ++n) {
            auto brute = brute_force_moments(s, n, 3);
            for (int j = 1; j <= 3; ++j) mismatches += moment(s, n, j) != brute[j - 1];
        }
        ++specs;
    }
    double t = seconds_since(t0);
    return {specs >= 20 && mismatches == 0 && t < 300,
            std::to_string(specs) + " specs, n=1..4, j<=3, " + std::to_string(mismatches) + " mismatches, " + std::to_string(t) + "s"};
}

Outcome mean_formula() {
    auto er = erdos_renyi_kernel(cycle_graph(3), make_rational(1, 2));
    Rational formula = mean_subgraph_count(er, 4);
    Rational brute = brute_force_moment(er.expand(), 4, 1);
    RcmSpec spec{4, PointLaw::uniform(2), Connection::constant(1), PSchedule{0.5, 0}};
    auto xs = run_replicates(spec, cycle_graph(3), 100000, 20240601, worker_count());
    std::vector<double> v;
    for (const auto& x : xs) v.push_back(static_cast<double>(x.count));
    auto k = sample_cumulants(v, 2);
    auto [se, se2] = cumulant_standard_errors(k, v.size());
    (void)se2;
    bool ok = formula == make_rational(1, 2) && brute == formula && std::fabs(k[0] - 0.5) <= 3 * se;
    std::ostringstream d;
    d << "formula " << to_string(formula) << ", brute force " << to_string(brute) << ", Monte Carlo " << k[0] << " (SE " << se << ")";
    return {ok, d.str()};
}

Outcome variance_identity() {
    std::mt19937_64 rng(5150);
    int cases = 0;
    bool ok = true;
    std::vector<FiniteModelSpec> specs;
    for (int t = 0; t < 8; ++t) specs.push_back(oracle::random_spec(rng, 2, 2 + t % 3, 1 + t % 2));
    specs.push_back(two_mark(path_graph(2), make_rational(1, 2)).expand());
    for (const auto& s : specs) {
        const Rational var1 = marginal_sum_variance(s);
        for (long long n : {3, 4, 5, 6}) {
            auto vd = variance_decomposition(s, n);
            auto kappa = exact_kappas(s, n, 2);
            ok = ok && vd.leading == Rational(falling_factorial(n, 3)) * var1 && vd.leading + vd.remainder == kappa[1] &&
                 vd.leading_matches_top_blocks && vd.remainder_from_small_blocks;
            ++cases;
        }
    }
    return {ok, std::to_string(cases) + " (spec, n) cases with k=2, n=3..6"};
}

Outcome bound_suites() {
    int checks = 0, violations = 0;
    auto check = [&](const Rational& value, const Rational& bound) {
        ++checks;
        violations += rabs(value) > bound;
    };
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 12; ++t) {
        auto s = oracle::random_spec(rng, 2, 2 + t % 2, 1 + t % 3);
        for (long long n : {2, 3, 5, 8}) {
            auto kappa = exact_kappas(s, n, 3);
            for (int j = 1; j <= 3; ++j) check(kappa[j - 1], general_cumulant_bound(n, 2, s.sup_norm(), j));
        }
    }
    for (int t = 0; t < 4; ++t) {
        auto s = oracle::random_spec(rng, 3, 2, 1 + t % 2);
        for (long long n : {3, 4, 7}) {
            auto kappa = exact_kappas(s, n, 2);
            for (int j = 1; j <= 2; ++j) check(kappa[j - 1], general_cumulant_bound(n, 3, s.sup_norm(), j));
        }
    }
    for (auto p : {make_rational(1, 20), make_rational(1, 3), make_rational(9, 10), Rational(1)}) {
        auto e = two_mark(path_graph(2), p);
        for (long long n : {2, 3, 5, 12, 40}) {
            auto kappa = exact_kappas(e.expand(), n, 3);
            for (int j = 1; j <= 3; ++j) {
                check(kappa[j - 1], general_cumulant_bound(n, 2, e.expand().sup_norm(), j));
                if (j >= 2) check(kappa[j - 1], subgraph_cumulant_bound(e.motif, n, p, j));
                if (j >= 2 && regime_at(e.motif, n, p) != Regime::critical) check(kappa[j - 1], regime_bound(e.motif, n, p, j));
            }
        }
        auto tri = two_mark(cycle_graph(3), p);
        auto tri_ex = moment_expansions(tri.expand(), 2);
        for (long long n : {3, 4, 6, 9, 30}) {
            auto kappa = moments_to_cumulants(moments_at(tri_ex, n));
            check(kappa[1], general_cumulant_bound(n, 3, tri.expand().sup_norm(), 2));
            check(kappa[1], subgraph_cumulant_bound(tri.motif, n, p, 2));
            if (regime_at(tri.motif, n, p) != Regime::critical) check(kappa[1], regime_bound(tri.motif, n, p, 2));
        }
    }
    return {violations == 0, std::to_string(checks) + " bound checks, " + std::to_string(violations) + " violations"};
}

Outcome cardinality() {
    bool ok = true;
    int grids = 0;
    for (int j = 1; j <= 10; ++j)
        for (int k = 1; j * k <= 10; ++k) {
            ok = ok && BigInt(enumerate_cnf(j, k, std::nullopt, 10).collect().size()) <= cnf_cardinality_bound(j, k);
            ++grids;
        }
    for (int j = 1; j <= 5; ++j)
        for (int k = 2; k <= 4; ++k) {
            BigInt m = count_maximal_cnf(j, k), base = ipow(BigInt((k - 1) * k), static_cast<unsigned>(j - 1));
            ok = ok && base * factorial(j - 1) <= m && m <= base * factorial(j);
        }
    return {ok, std::to_string(grids) + " enumerated grids, sandwich for j<=5, k=2..4"};
}

Outcome normality_trend() {
    auto t0 = Clock::now();
    auto cfg = simulation_config_from_json(read_json(kConfigs + "/normality.json"));
    auto res = run_simulation(cfg, worker_count());
    bool ok = true;
    std::ostringstream d;
    for (std::size_t s = 0; s < cfg.schedules.size(); ++s) {
        std::vector<double> ks;
        for (const auto& r : res.rows)
            if (r.schedule == static_cast<int>(s)) ks.push_back(r.ks_median.value_or(1.0));
        int inversions = 0;
        for (std::size_t i = 0; i + 1 < ks.size(); ++i)
            if (ks[i + 1] > ks[i]) {
                ++inversions;
                if (ks[i + 1] - ks[i] > 0.01) ok = false;
            }
        if (inversions > 1) ok = false;
        d << "a=" << cfg.schedules[s].schedule.a << " median KS";
        for (double v : ks) d << " " << v;
        d << "; ";
    }
    double t = seconds_since(t0);
    d << t << "s";
    return {ok && t < 600, d.str()};
}

Outcome threshold_direction() {
    auto cfg = simulation_config_from_json(read_json(kConfigs + "/threshold.json"));
    auto res = threshold_experiment(cfg, worker_count());
    bool ok = true, sandwich = true;
    std::ostringstream d;
    std::vector<double> at200;
    for (std::size_t s = 0; s < cfg.schedules.size(); ++s) {
        std::vector<const SummaryRow*> col;
        for (const auto& r : res.rows)
            if (r.schedule == static_cast<int>(s)) col.push_back(&r);
        const bool rising = col.front()->containment == "subcritical";
        for (std::size_t i = 0; i + 1 < col.size(); ++i) {
            if (rising) ok = ok && col[i]->p_zero_ci.lo <= col[i + 1]->p_zero_ci.hi;
            else ok = ok && col[i]->p_zero_ci.hi >= col[i + 1]->p_zero_ci.lo;
        }
        for (const auto* r : col) {
            sandwich = sandwich && r->sandwich_holds;
            if (r->n == 200) at200.push_back(r->p_zero);
        }
        d << "a=" << cfg.schedules[s].schedule.a << " P(N=0)";
        for (const auto* r : col) d << " " << r->p_zero;
        d << "; ";
    }
    ok = ok && sandwich && at200.size() == 2 && at200[0] - at200[1] >= 0.5;
    d << "sandwich " << (sandwich ? "holds on every run" : "violated");
    return {ok, d.str()};
}

Outcome statulevicius_growth() {
    auto spec = subgraph_kernel_from_json(read_json(kConfigs + "/two_mark_triangle.json"));
    ExactOptions o;
    o.threads = worker_count();
    auto ex = moment_expansions(spec.expand(), 4, o);
    std::vector<double> deltas;
    for (long long n : {8, 12, 16}) {
        auto norm = normalized_cumulants(moments_to_cumulants(moments_at(ex, n)));
        deltas.push_back(fit_statulevicius(norm, spec.motif.vertex_count(), orders_from_three(norm.size())).delta);
    }
    bool ok = deltas[0] < deltas[1] && deltas[1] < deltas[2];
    std::ostringstream d;
    d << "two-mark triangle kernel, gamma=3, delta at n=8,12,16:";
    for (double v : deltas) d << " " << v;
    return {ok, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 diagram reproduction", diagrams},
        {"2 contraction reproduction", contraction},
        {"3 oracle equivalence", oracle_equivalence},
        {"4 mean formula", mean_formula},
        {"5 variance identity", variance_identity},
        {"6 bound suites", bound_suites},
        {"7 cardinality laws", cardinality},
        {"8 normality trend", normality_trend},
        {"9 threshold direction", threshold_direction},
        {"10 statulevicius growth", statulevicius_growth},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failures += !out.pass;
        std::cout << (out.pass ? "PASS" : "FAIL") << "  " << name << "  (" << out.detail << ")" << std::endl;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
