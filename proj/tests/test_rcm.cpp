#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "gustat/experiment.hpp"
#include "gustat/rcm.hpp"
#include "gustat/stats.hpp"

using namespace gustat;

namespace {

RcmSpec er(long long n, double p) { return {n, PointLaw::uniform(1), Connection::constant(1), PSchedule{p, 0}}; }

// Copies of the motif: distinct (vertex set, edge set) images of bijections.
long long copies_oracle(const Graph& g, const MotifGraph& m) {
    const int n = g.vertex_count(), k = m.vertex_count();
    std::set<std::vector<std::pair<int, int>>> seen;
    std::vector<int> pick(k);
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == k) {
            std::vector<int> perm = pick;
            std::sort(perm.begin(), perm.end());
            do {
                bool ok = true;
                std::vector<std::pair<int, int>> img;
                for (auto [u, v] : m.edges()) {
                    int a = perm[u], b = perm[v];
                    if (!g.adjacent(a, b)) {
                        ok = false;
                        break;
                    }
                    img.emplace_back(std::min(a, b), std::max(a, b));
                }
                if (ok) {
                    std::sort(img.begin(), img.end());
                    std::vector<std::pair<int, int>> key = img;
                    for (int v : perm) key.emplace_back(-1, v);
                    std::sort(key.begin(), key.end());
                    seen.insert(key);
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (int v = start; v < n; ++v) {
            pick[depth] = v;
            choose(v + 1, depth + 1);
        }
    };
    choose(0, 0);
    return static_cast<long long>(seen.size());
}

double mean_of(const std::vector<double>& xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(); }

}  // namespace

TEST(Sample, CompleteAndTrivial) {
    auto g = sample_graph(er(7, 1.0), 1);
    EXPECT_EQ(g.edge_count(), 21);
    auto h = sample_graph({5, PointLaw::uniform(2), Connection::hard_ball(2.0), PSchedule{1, 0}}, 3);
    EXPECT_EQ(h.edge_count(), 10);
    EXPECT_EQ(sample_graph(er(1, 0.5), 4).edge_count(), 0);
    PSchedule tiny{1e-30, 0};
    EXPECT_GT(tiny.at(10), 0);
    EXPECT_THROW((PSchedule{0, 1}.at(5)), ArgumentError);
}

TEST(Sample, Deterministic) {
    RcmSpec s{30, PointLaw::uniform(2), Connection::hard_ball(0.3), PSchedule{1, 0.2}};
    auto a = sample_graph(s, 99), b = sample_graph(s, 99), c = sample_graph(s, 100);
    for (int u = 0; u < 30; ++u)
        for (int v = 0; v < 30; ++v) ASSERT_EQ(a.adjacent(u, v), b.adjacent(u, v));
    EXPECT_TRUE(a.edge_count() != c.edge_count() || a.neighbours(0) != c.neighbours(0) || a.neighbours(1) != c.neighbours(1));
}

TEST(Sample, BinomialEdgeCount) {
    std::vector<double> e;
    for (int r = 0; r < 10000; ++r) e.push_back(static_cast<double>(sample_graph(er(4, 0.5), replicate_seed(5, r)).edge_count()));
    auto k = sample_cumulants(e, 2);
    EXPECT_NEAR(k[0], 3.0, 3 * std::sqrt(1.5 / 10000));
    EXPECT_NEAR(k[1], 1.5, 0.1);
}

TEST(Sample, FiniteMarks) {
    RcmSpec s{200, PointLaw::finite({0.25, 0.75}), Connection::from_table({{1, 0}, {0, 0}}), PSchedule{1, 0}};
    // only mark-0 pairs connect: edges = C(#mark0, 2)
    auto g = sample_graph(s, 8);
    long long e = g.edge_count();
    long long m = 0;
    while (m * (m - 1) / 2 < e) ++m;
    EXPECT_EQ(m * (m - 1) / 2, e);
    EXPECT_NEAR(static_cast<double>(m) / 200, 0.25, 0.1);
}

TEST(Count, Examples) {
    EXPECT_EQ(count_subgraphs(Graph(5), cycle_graph(3)), 0);
    EXPECT_EQ(count_subgraphs(Graph::complete(4), cycle_graph(3)), 4);
    Graph path(4);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    EXPECT_EQ(count_subgraphs(path, path_graph(3)), 2);
    EXPECT_THROW(count_subgraphs(Graph(2), cycle_graph(3)), ArgumentError);
}

TEST(Count, CompleteGraphs) {
    for (int n = 1; n <= 8; ++n)
        for (int k = 1; k <= std::min(n, 4); ++k) {
            long long c = 1;
            for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
            EXPECT_EQ(count_subgraphs(Graph::complete(n), complete_graph(k)), c) << n << " " << k;
        }
}

TEST(Count, MatchesCopyOracle) {
    std::vector<MotifGraph> motifs{cycle_graph(3), path_graph(3), path_graph(4), star_graph(4), cycle_graph(4),
                                   MotifGraph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}})};
    for (int t = 0; t < 6; ++t) {
        auto g = sample_graph(er(7, 0.5), 1000 + t);
        for (const auto& m : motifs) ASSERT_EQ(count_subgraphs(g, m), copies_oracle(g, m));
    }
}

TEST(Replicates, SingleAndDeterministic) {
    auto s = er(6, 0.5);
    auto one = run_replicates(s, cycle_graph(3), 1, 42);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].count, count_subgraphs(sample_graph(s, replicate_seed(42, 0)), cycle_graph(3)));
    EXPECT_EQ(one[0].seed_used, replicate_seed(42, 0));
    auto a = run_replicates(s, cycle_graph(3), 200, 7);
    auto b = run_replicates(s, cycle_graph(3), 200, 7, 4);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].replicate_id, static_cast<long long>(i));
        EXPECT_GE(a[i].count, 0);
        EXPECT_LE(a[i].count, 20);
    }
    EXPECT_THROW(run_replicates(s, cycle_graph(3), 0, 1), ArgumentError);
}

TEST(Replicates, TriangleMeanAndVariance) {
    auto xs = run_replicates(er(4, 0.5), cycle_graph(3), 100000, 2024);
    std::vector<double> v;
    for (const auto& x : xs) v.push_back(static_cast<double>(x.count));
    auto k = sample_cumulants(v, 4);
    auto [se1, se2] = cumulant_standard_errors(k, v.size());
    EXPECT_LE(std::fabs(k[0] - 0.5), 3 * se1);
    EXPECT_LE(std::fabs(k[1] - 0.625), 3 * se2);
}

TEST(Stats, KStatistics) {
    auto c = sample_cumulants(std::vector<double>(10, 3.5), 4);
    EXPECT_DOUBLE_EQ(c[0], 3.5);
    for (int j = 1; j < 4; ++j) EXPECT_NEAR(c[j], 0.0, 1e-12);
    std::vector<double> bern(4000);
    for (std::size_t i = 0; i < bern.size(); ++i) bern[i] = static_cast<double>(i % 2);
    auto kb = sample_cumulants(bern, 4);
    EXPECT_NEAR(kb[1], 0.25, 1e-4);
    // textbook values for {1,2,3,4,10}
    auto kt = sample_cumulants(std::vector<double>{1, 2, 3, 4, 10}, 4);
    EXPECT_NEAR(kt[1], 12.5, 1e-12);
    EXPECT_NEAR(kt[2], 75.0, 1e-9);
    EXPECT_THROW(sample_cumulants(std::vector<double>{1, 2, 3}, 3), ArgumentError);
    EXPECT_THROW(sample_cumulants(std::vector<double>{1, 2, 3}, 5), ArgumentError);
}

TEST(Stats, KolmogorovDistance) {
    EXPECT_NEAR(ks_distance_to_normal(std::vector<double>{-1, 1}), normal_cdf(1) - 0.5, 1e-12);
    EXPECT_NEAR(normal_cdf(1) - 0.5, 0.3413, 1e-4);
    EXPECT_THROW(ks_distance_to_normal(std::vector<double>{2, 2, 2}), DegenerateSampleError);
    const int r = 999;
    boost::math::normal nd;
    std::vector<double> qs;
    for (int i = 1; i <= r; ++i) qs.push_back(boost::math::quantile(nd, i / (r + 1.0)));
    double gap = 0;
    for (int i = 1; i < r; ++i) gap = std::max(gap, qs[i] - qs[i - 1]);
    double d = ks_distance_to_normal(qs);
    EXPECT_LE(d, 1.0 / (r + 1) + gap);
    EXPECT_LT(d, 0.01);
    // distance is scale and shift invariant
    std::vector<double> moved;
    for (double x : qs) moved.push_back(3 * x + 7);
    EXPECT_NEAR(ks_distance_to_normal(moved), d, 1e-12);
}

TEST(Stats, Wilson) {
    auto i0 = wilson_interval(0, 10);
    EXPECT_DOUBLE_EQ(i0.lo, 0.0);
    EXPECT_NEAR(i0.hi, 0.2775, 1e-4);
    auto ih = wilson_interval(50, 100);
    EXPECT_NEAR(ih.lo, 0.4038, 1e-4);
    EXPECT_NEAR(ih.hi, 0.5962, 1e-4);
    EXPECT_THROW(wilson_interval(3, 2), ArgumentError);
}

TEST(Experiment, CompleteGraphAlwaysContains) {
    SimulationConfig cfg;
    cfg.motif = cycle_graph(3);
    cfg.connection = Connection::constant(1);
    cfg.n_grid = {3, 5, 9};
    cfg.schedules = {{PSchedule{1, 0}, Rational(0)}};
    cfg.reps = 50;
    cfg.seed = 1;
    auto res = threshold_experiment(cfg);
    EXPECT_EQ(res.assumption_one, "fails");
    for (const auto& row : res.rows) {
        EXPECT_EQ(row.p_zero, 0.0);
        EXPECT_TRUE(row.sandwich_holds);
    }
}

TEST(Experiment, ThresholdDirections) {
    SimulationConfig cfg;
    cfg.motif = cycle_graph(3);
    cfg.connection = Connection::hard_ball(0.3);
    cfg.n_grid = {50, 100, 200};
    cfg.schedules = {{PSchedule{0.2, 1.2}, make_rational(6, 5)}, {PSchedule{5, 0.8}, make_rational(4, 5)}};
    cfg.reps = 400;
    cfg.seed = 17;
    auto res = threshold_experiment(cfg);
    EXPECT_EQ(res.assumption_one, "unchecked");
    ASSERT_EQ(res.rows.size(), 6u);
    for (const auto& r : res.rows) EXPECT_TRUE(r.sandwich_holds);
    // subcritical column rises toward 1, supercritical one falls toward 0
    for (int i = 0; i + 1 < 3; ++i) {
        EXPECT_LE(res.rows[i].p_zero_ci.lo, res.rows[i + 1].p_zero_ci.hi);
        EXPECT_GE(res.rows[3 + i].p_zero_ci.hi, res.rows[3 + i + 1].p_zero_ci.lo);
    }
    EXPECT_GT(res.rows[2].p_zero - res.rows[5].p_zero, 0.5);
    EXPECT_EQ(res.rows[0].containment, "subcritical");
    EXPECT_EQ(res.rows[3].containment, "supercritical");
}

TEST(Experiment, RefusesUnbalancedMotifAndFlatKernel) {
    SimulationConfig cfg;
    cfg.motif = MotifGraph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    cfg.n_grid = {10};
    cfg.schedules = {{PSchedule{1, 0}, Rational(0)}};
    cfg.reps = 5;
    EXPECT_THROW(threshold_experiment(cfg), ArgumentError);
    cfg.motif = cycle_graph(3);
    cfg.law = PointLaw::finite({0.5, 0.5});
    cfg.connection = Connection::from_table({{0.5, 0.5}, {0.5, 0.5}});
    EXPECT_THROW(threshold_experiment(cfg), ArgumentError);
    cfg.connection = Connection::from_table({{1, 0.5}, {0.5, 0.25}});
    EXPECT_EQ(assumption_one_status(cfg), "holds");
}

TEST(Experiment, ExactMeanForFiniteMarks) {
    SimulationConfig cfg;
    cfg.motif = cycle_graph(3);
    cfg.law = PointLaw::finite({0.5, 0.5});
    cfg.connection = Connection::from_table({{1, 0.5}, {0.5, 0.25}});
    cfg.n_grid = {12};
    cfg.schedules = {{PSchedule{1, 0.5}, make_rational(1, 2)}};
    cfg.reps = 20000;
    cfg.seed = 5;
    cfg.exact_standardization = true;
    auto res = run_simulation(cfg);
    const auto& r = res.rows[0];
    ASSERT_TRUE(r.exact_mean.has_value());
    EXPECT_LE(std::fabs(r.cumulants[0] - *r.exact_mean), 3 * r.se_mean);
    ASSERT_TRUE(r.ks_exact.has_value());
    EXPECT_GE(*r.ks_exact, 0.0);
    EXPECT_LE(*r.ks_exact, 1.0);
}

TEST(Experiment, HardBallSeedsAgree) {
    SimulationConfig cfg;
    cfg.motif = cycle_graph(3);
    cfg.connection = Connection::hard_ball(0.3);
    cfg.n_grid = {20};
    cfg.schedules = {{PSchedule{1, 0}, Rational(0)}};
    cfg.reps = 4000;
    cfg.seed = 1;
    auto a = run_simulation(cfg);
    cfg.seed = 2;
    auto b = run_simulation(cfg);
    double se = std::hypot(a.rows[0].se_mean, b.rows[0].se_mean);
    EXPECT_LE(std::fabs(a.rows[0].cumulants[0] - b.rows[0].cumulants[0]), 4 * se);
}
