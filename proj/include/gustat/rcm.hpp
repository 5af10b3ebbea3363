#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gustat/errors.hpp"
#include "gustat/exact.hpp"
#include "gustat/model.hpp"
#include "gustat/motif.hpp"
#include "gustat/rational.hpp"
#include "gustat/rng.hpp"

namespace gustat {

struct PointLaw {
    enum class Kind { uniform_cube, finite };
    Kind kind = Kind::uniform_cube;
    int dimension = 2;
    std::vector<std::string> labels;
    std::vector<double> probs;

    static PointLaw uniform(int d) {
        if (d < 1) throw ArgumentError("uniform point law needs dimension >= 1");
        return {Kind::uniform_cube, d, {}, {}};
    }

    static PointLaw finite(std::vector<double> probs, std::vector<std::string> labels = {}) {
        PointLaw law{Kind::finite, 1, std::move(labels), std::move(probs)};
        law.validate();
        return law;
    }

    int coordinates() const { return kind == Kind::uniform_cube ? dimension : 1; }

    void validate() const {
        if (kind == Kind::uniform_cube) {
            if (dimension < 1) throw ArgumentError("uniform point law needs dimension >= 1");
            return;
        }
        if (probs.empty()) throw ArgumentError("finite point law is empty");
        double total = 0;
        for (double q : probs) {
            if (!(q >= 0)) throw ArgumentError("finite point law has a negative probability");
            total += q;
        }
        if (std::fabs(total - 1) > 1e-12) throw ArgumentError("finite point law does not sum to 1");
    }
};

struct Connection {
    enum class Kind { constant, hard_ball, exponential, table };
    Kind kind = Kind::constant;
    double value = 1;   // constant
    double radius = 0;  // hard ball
    double rate = 0;    // exponential decay exp(-rate |x-y|)
    std::vector<std::vector<double>> table;

    static Connection constant(double h) { return {Kind::constant, h, 0, 0, {}}; }
    static Connection hard_ball(double r) { return {Kind::hard_ball, 1, r, 0, {}}; }
    static Connection exponential(double beta) { return {Kind::exponential, 1, 0, beta, {}}; }
    static Connection from_table(std::vector<std::vector<double>> t) { return {Kind::table, 1, 0, 0, std::move(t)}; }

    void validate(const PointLaw& law) const {
        switch (kind) {
            case Kind::constant:
                if (!(value >= 0 && value <= 1)) throw ArgumentError("constant connection must lie in [0,1]");
                break;
            case Kind::hard_ball:
            case Kind::exponential:
                if (law.kind != PointLaw::Kind::uniform_cube)
                    throw ArgumentError("distance-based connections need a continuous point law");
                if (kind == Kind::hard_ball && !(radius >= 0)) throw ArgumentError("hard-ball radius must be nonnegative");
                if (kind == Kind::exponential && !(rate >= 0)) throw ArgumentError("decay rate must be nonnegative");
                break;
            case Kind::table: {
                if (law.kind != PointLaw::Kind::finite) throw ArgumentError("table connections need a finite point law");
                const auto m = law.probs.size();
                if (table.size() != m) throw ArgumentError("connection table has wrong size");
                for (std::size_t a = 0; a < m; ++a) {
                    if (table[a].size() != m) throw ArgumentError("connection table has wrong size");
                    for (std::size_t b = 0; b < m; ++b) {
                        if (table[a][b] != table[b][a]) throw ArgumentError("connection table is not symmetric");
                        if (!(table[a][b] >= 0 && table[a][b] <= 1)) throw ArgumentError("connection value outside [0,1]");
                    }
                }
                break;
            }
        }
    }

    double operator()(const double* x, const double* y, int coords) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::table: return table[static_cast<std::size_t>(x[0])][static_cast<std::size_t>(y[0])];
            default: break;
        }
        double d2 = 0;
        for (int c = 0; c < coords; ++c) d2 += (x[c] - y[c]) * (x[c] - y[c]);
        if (kind == Kind::hard_ball) return d2 <= radius * radius ? 1.0 : 0.0;
        return std::exp(-rate * std::sqrt(d2));
    }
};

// p_n = min(1, c n^{-a}), clamped away from zero.
struct PSchedule {
    double c = 1;
    double a = 0;

    double at(long long n) const {
        if (!(c > 0)) throw ArgumentError("p schedule needs c > 0");
        double p = c * std::pow(static_cast<double>(n), -a);
        return std::clamp(p, 1e-12, 1.0);
    }
};

struct RcmSpec {
    long long n = 1;
    PointLaw law;
    Connection connection;
    PSchedule schedule;

    double p() const { return schedule.at(n); }

    void validate() const {
        if (n < 1) throw ArgumentError("RCM needs n >= 1");
        law.validate();
        connection.validate(law);
        (void)schedule.at(n);
    }
};

class Graph {
public:
    explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0), nbrs_(static_cast<std::size_t>(n)) {}

    int vertex_count() const { return n_; }
    bool adjacent(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    const std::vector<int>& neighbours(int u) const { return nbrs_[u]; }

    long long edge_count() const {
        long long e = 0;
        for (const auto& nb : nbrs_) e += static_cast<long long>(nb.size());
        return e / 2;
    }

    void add_edge(int u, int v) {
        if (u == v || adjacent(u, v)) return;
        adj_[static_cast<std::size_t>(u) * n_ + v] = adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
        nbrs_[u].push_back(v);
        nbrs_[v].push_back(u);
    }

    static Graph complete(int n) {
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
        return g;
    }

private:
    int n_;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<int>> nbrs_;
};

inline Graph sample_graph(const RcmSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.n > 100000) throw SizeLimitError("RCM sampling is limited to 1e5 vertices");
    const int n = static_cast<int>(spec.n);
    const int dims = spec.law.coordinates();
    const double p = spec.p();
    Rng rng(seed);
    std::vector<double> pts(static_cast<std::size_t>(n) * dims);
    if (spec.law.kind == PointLaw::Kind::uniform_cube) {
        for (auto& c : pts) c = rng.uniform();
    } else {
        for (int i = 0; i < n; ++i) {
            double u = rng.uniform(), acc = 0;
            std::size_t m = 0;
            for (; m + 1 < spec.law.probs.size(); ++m) {
                acc += spec.law.probs[m];
                if (u < acc) break;
            }
            pts[i] = static_cast<double>(m);
        }
    }
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double h = spec.connection(&pts[static_cast<std::size_t>(u) * dims], &pts[static_cast<std::size_t>(v) * dims], dims);
            if (rng.uniform() < p * h) g.add_edge(u, v);
        }
    return g;
}

/// Injective homomorphisms of the motif into g, divided by a(motif).
inline long long count_subgraphs(const Graph& g, const MotifGraph& motif) {
    const int k = motif.vertex_count();
    if (k > g.vertex_count()) throw ArgumentError("motif has more vertices than the graph");
    // placement order: each next vertex has the most already-placed neighbours
    std::vector<int> order;
    std::vector<bool> placed(static_cast<std::size_t>(k), false);
    for (int step = 0; step < k; ++step) {
        int best = -1, best_links = -1;
        for (int v = 0; v < k; ++v) {
            if (placed[v]) continue;
            int links = 0;
            for (int u : order) links += motif.adjacent(u, v);
            if (links > best_links || (links == best_links && motif.degree(v) > motif.degree(best))) {
                best = v;
                best_links = links;
            }
        }
        placed[best] = true;
        order.push_back(best);
    }
    std::vector<std::vector<int>> back(static_cast<std::size_t>(k));  // earlier neighbours in order
    for (int i = 0; i < k; ++i)
        for (int t = 0; t < i; ++t)
            if (motif.adjacent(order[i], order[t])) back[i].push_back(t);

    const int n = g.vertex_count();
    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);
    unsigned long long homs = 0;
    auto fits = [&](int i, int w) {
        if (used[w]) return false;
        for (int t : back[i])
            if (!g.adjacent(image[t], w)) return false;
        return true;
    };
    auto rec = [&](auto&& self, int i) -> void {
        if (i == k) {
            ++homs;
            return;
        }
        auto place = [&](int w) {
            if (!fits(i, w)) return;
            image[i] = w;
            used[w] = 1;
            self(self, i + 1);
            used[w] = 0;
        };
        if (back[i].empty()) {
            for (int w = 0; w < n; ++w) place(w);
        } else {
            for (int w : g.neighbours(image[back[i].front()])) place(w);
        }
    };
    rec(rec, 0);
    const unsigned long long a = static_cast<unsigned long long>(automorphism_count(motif));
    if (homs % a != 0) throw std::logic_error("injective homomorphism count is not divisible by a(G)");
    return static_cast<long long>(homs / a);
}

struct CountSample {
    long long replicate_id = 0;
    long long n = 0;
    long long count = 0;
    std::uint64_t seed_used = 0;

    friend bool operator==(const CountSample&, const CountSample&) = default;
};

inline std::vector<CountSample> run_replicates(const RcmSpec& spec, const MotifGraph& motif, long long reps,
                                               std::uint64_t seed, int threads = 1) {
    if (reps < 1) throw ArgumentError("run_replicates: reps must be positive");
    spec.validate();
    std::vector<CountSample> out(static_cast<std::size_t>(reps));
    const int workers = static_cast<int>(std::max<long long>(1, std::min<long long>(threads, reps)));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
        try {
            for (long long r = w; r < reps; r += workers) {
                std::uint64_t s = replicate_seed(seed, static_cast<std::uint64_t>(r));
                out[r] = {r, spec.n, count_subgraphs(sample_graph(spec, s), motif), s};
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Exact finite-mark counterpart: p is the exact binary value, marks and H are
// read as their shortest decimals (probabilities renormalized).
inline std::optional<SubgraphKernelSpec> exact_kernel(const RcmSpec& spec, const MotifGraph& motif) {
    SubgraphKernelSpec s;
    s.motif = motif;
    s.p = from_double(spec.p());
    if (spec.law.kind == PointLaw::Kind::finite) {
        for (std::size_t m = 0; m < spec.law.probs.size(); ++m) {
            s.vertex_labels.push_back(m < spec.law.labels.size() ? spec.law.labels[m] : std::to_string(m));
            s.vertex_probs.push_back(decimal_rational(spec.law.probs[m]));
        }
        Rational total = 0;
        for (const auto& q : s.vertex_probs) total += q;
        if (total <= 0) return std::nullopt;
        for (auto& q : s.vertex_probs) q /= total;
        const auto m = s.vertex_probs.size();
        s.connection.assign(m, std::vector<Rational>(m));
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                s.connection[a][b] = decimal_rational(spec.connection.kind == Connection::Kind::constant ? spec.connection.value
                                                                                               : spec.connection.table[a][b]);
        return s;
    }
    if (spec.connection.kind == Connection::Kind::constant) {
        s.vertex_labels = {"x"};
        s.vertex_probs = {Rational(1)};
        s.connection = {{decimal_rational(spec.connection.value)}};
        return s;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

inline double number_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    return to_double(rational_from_json(j));
}

inline PointLaw point_law_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return PointLaw::uniform(j.value("dimension", 2));
    if (kind == "finite") {
        std::vector<double> probs;
        std::vector<std::string> labels;
        for (const auto& m : j.at("marks")) {
            labels.push_back(m.value("label", std::to_string(labels.size())));
            probs.push_back(number_from_json(m.at("p")));
        }
        return PointLaw::finite(std::move(probs), std::move(labels));
    }
    throw ParseError("unknown point law '" + kind + "'");
}

inline nlohmann::json to_json(const PointLaw& law) {
    if (law.kind == PointLaw::Kind::uniform_cube) return {{"kind", "uniform"}, {"dimension", law.dimension}};
    nlohmann::json marks = nlohmann::json::array();
    for (std::size_t m = 0; m < law.probs.size(); ++m)
        marks.push_back({{"label", m < law.labels.size() ? law.labels[m] : std::to_string(m)}, {"p", law.probs[m]}});
    return {{"kind", "finite"}, {"marks", marks}};
}

inline Connection connection_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return Connection::constant(number_from_json(j.value("value", nlohmann::json(1))));
    if (kind == "hard_ball") return Connection::hard_ball(number_from_json(j.at("radius")));
    if (kind == "exponential") return Connection::exponential(number_from_json(j.at("rate")));
    if (kind == "table") {
        std::vector<std::vector<double>> t;
        for (const auto& row : j.at("values")) {
            t.emplace_back();
            for (const auto& v : row) t.back().push_back(number_from_json(v));
        }
        return Connection::from_table(std::move(t));
    }
    throw ParseError("unknown connection '" + kind + "'");
}

inline nlohmann::json to_json(const Connection& c) {
    switch (c.kind) {
        case Connection::Kind::constant: return {{"kind", "constant"}, {"value", c.value}};
        case Connection::Kind::hard_ball: return {{"kind", "hard_ball"}, {"radius", c.radius}};
        case Connection::Kind::exponential: return {{"kind", "exponential"}, {"rate", c.rate}};
        default: return {{"kind", "table"}, {"values", c.table}};
    }
}

}  // namespace gustat
