#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gustat/errors.hpp"
#include "gustat/motif.hpp"
#include "gustat/rational.hpp"

namespace gustat {

// Position of the unordered vertex pair (u, v), u < v, in the order
// (0,1), (0,2), ..., (0,k-1), (1,2), ..., (k-2,k-1).
inline int edge_slot(int u, int v, int k) {
    if (u > v) std::swap(u, v);
    return u * (2 * k - u - 1) / 2 + (v - u - 1);
}

/// Finite ground spaces and a total kernel table.
///
/// The kernel f(x_1..x_k, y_12..y_(k-1)k) is stored row-major with the vertex
/// marks first and the edge marks (in edge_slot order) last.
struct FiniteModelSpec {
    int k = 2;
    std::vector<std::string> vertex_labels;
    std::vector<Rational> vertex_probs;
    std::vector<std::string> edge_labels;
    std::vector<Rational> edge_probs;
    std::vector<Rational> kernel;

    int vertex_space_size() const { return static_cast<int>(vertex_probs.size()); }
    int edge_space_size() const { return static_cast<int>(edge_probs.size()); }
    int edge_slots() const { return k * (k - 1) / 2; }

    std::size_t table_size() const {
        std::size_t size = 1;
        for (int i = 0; i < k; ++i) size *= static_cast<std::size_t>(vertex_space_size());
        for (int i = 0; i < edge_slots(); ++i) size *= static_cast<std::size_t>(edge_space_size());
        return size;
    }

    std::size_t index(std::span<const int> x, std::span<const int> y) const {
        std::size_t idx = 0;
        for (int v : x) idx = idx * static_cast<std::size_t>(vertex_space_size()) + static_cast<std::size_t>(v);
        for (int e : y) idx = idx * static_cast<std::size_t>(edge_space_size()) + static_cast<std::size_t>(e);
        return idx;
    }

    const Rational& operator()(std::span<const int> x, std::span<const int> y) const { return kernel[index(x, y)]; }

    Rational sup_norm() const {
        Rational best = 0;
        for (const auto& v : kernel) best = std::max(best, rabs(v));
        return best;
    }

    void validate() const {
        if (k < 1) throw ArgumentError("kernel arity k must be positive");
        auto check_space = [](const std::vector<Rational>& probs, const char* what) {
            if (probs.empty()) throw ArgumentError(std::string(what) + " space is empty");
            Rational total = 0;
            for (const auto& q : probs) {
                if (q < 0) throw ArgumentError(std::string(what) + " probability is negative");
                total += q;
            }
            if (total != 1) throw ArgumentError(std::string(what) + " probabilities do not sum to 1");
        };
        check_space(vertex_probs, "vertex");
        check_space(edge_probs, "edge");
        if (!vertex_labels.empty() && vertex_labels.size() != vertex_probs.size())
            throw ArgumentError("vertex labels and probabilities differ in length");
        if (!edge_labels.empty() && edge_labels.size() != edge_probs.size())
            throw ArgumentError("edge labels and probabilities differ in length");
        if (kernel.size() != table_size())
            throw ArgumentError("kernel table has " + std::to_string(kernel.size()) + " entries, expected " +
                                std::to_string(table_size()));
    }

    // Fills the kernel table from a callable f(x, y).
    template <typename Kernel>
    static FiniteModelSpec tabulate(int k, std::vector<Rational> vertex_probs, std::vector<Rational> edge_probs,
                                    Kernel&& f) {
        FiniteModelSpec spec;
        spec.k = k;
        spec.vertex_probs = std::move(vertex_probs);
        spec.edge_probs = std::move(edge_probs);
        for (int i = 0; i < spec.vertex_space_size(); ++i) spec.vertex_labels.push_back("v" + std::to_string(i));
        for (int i = 0; i < spec.edge_space_size(); ++i) spec.edge_labels.push_back("e" + std::to_string(i));
        const std::size_t size = spec.table_size();
        spec.kernel.resize(size);
        std::vector<int> x(static_cast<std::size_t>(k)), y(static_cast<std::size_t>(spec.edge_slots()));
        for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rest = idx;
            for (int s = spec.edge_slots() - 1; s >= 0; --s) {
                y[s] = static_cast<int>(rest % static_cast<std::size_t>(spec.edge_space_size()));
                rest /= static_cast<std::size_t>(spec.edge_space_size());
            }
            for (int v = k - 1; v >= 0; --v) {
                x[v] = static_cast<int>(rest % static_cast<std::size_t>(spec.vertex_space_size()));
                rest /= static_cast<std::size_t>(spec.vertex_space_size());
            }
            spec.kernel[idx] = f(std::span<const int>(x), std::span<const int>(y));
        }
        spec.validate();
        return spec;
    }
};

/// Indicator kernel of a motif in the binomial random-connection model over a
/// finite vertex-mark space.
struct SubgraphKernelSpec {
    MotifGraph motif;
    std::vector<std::string> vertex_labels;
    std::vector<Rational> vertex_probs;
    std::vector<std::vector<Rational>> connection;  // H, symmetric, entries in [0,1]
    Rational p = 1;

    int vertex_space_size() const { return static_cast<int>(vertex_probs.size()); }

    void validate() const {
        if (motif.vertex_count() < 2) throw ArgumentError("motif needs at least two vertices");
        if (vertex_probs.empty()) throw ArgumentError("vertex space is empty");
        Rational total = 0;
        for (const auto& q : vertex_probs) {
            if (q < 0) throw ArgumentError("vertex probability is negative");
            total += q;
        }
        if (total != 1) throw ArgumentError("vertex probabilities do not sum to 1");
        const auto m = vertex_probs.size();
        if (connection.size() != m) throw ArgumentError("connection table has wrong size");
        for (std::size_t a = 0; a < m; ++a) {
            if (connection[a].size() != m) throw ArgumentError("connection table has wrong size");
            for (std::size_t b = 0; b < m; ++b) {
                if (connection[a][b] != connection[b][a]) throw ArgumentError("connection table is not symmetric");
                if (connection[a][b] < 0 || connection[a][b] > 1) throw ArgumentError("connection value outside [0,1]");
            }
        }
        if (p <= 0 || p > 1) throw ArgumentError("p must lie in (0,1]");
    }

    // Distinct connection probabilities p*H, sorted, with 0 and 1 added.
    std::vector<Rational> thresholds() const {
        std::vector<Rational> t{Rational(0), Rational(1)};
        for (const auto& row : connection)
            for (const auto& h : row) t.push_back(p * h);
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        return t;
    }

    // Edge marks are the intervals between consecutive thresholds of a uniform
    // Y on [0,1]; mark m connects a pair iff its interval lies below p*H.
    FiniteModelSpec expand() const {
        validate();
        const auto t = thresholds();
        std::vector<Rational> lengths;
        std::vector<Rational> upper;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            lengths.push_back(t[i + 1] - t[i]);
            upper.push_back(t[i + 1]);
        }
        const int k = motif.vertex_count();
        const Rational weight = Rational(1) / automorphism_count(motif);
        auto spec = FiniteModelSpec::tabulate(k, vertex_probs, lengths, [&](std::span<const int> x, std::span<const int> y) {
            for (auto [u, v] : motif.edges()) {
                const Rational ph = p * connection[x[u]][x[v]];
                if (upper[y[edge_slot(u, v, k)]] > ph) return Rational(0);
            }
            return weight;
        });
        if (vertex_labels.size() == vertex_probs.size()) spec.vertex_labels = vertex_labels;
        for (std::size_t i = 0; i < upper.size(); ++i)
            spec.edge_labels[i] = "[" + to_string(t[i]) + "," + to_string(t[i + 1]) + ")";
        return spec;
    }
};

// Erdos-Renyi special case: one vertex mark, H = 1.
inline SubgraphKernelSpec erdos_renyi_kernel(const MotifGraph& motif, const Rational& p) {
    SubgraphKernelSpec s;
    s.motif = motif;
    s.vertex_labels = {"x"};
    s.vertex_probs = {Rational(1)};
    s.connection = {{Rational(1)}};
    s.p = p;
    return s;
}

// ---------------------------------------------------------------------------
// JSON: rationals are [numerator, denominator] pairs; integers, decimal and
// "a/b" strings are accepted on input.

inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_array() && j.size() == 2) {
        auto part = [](const nlohmann::json& v) {
            if (v.is_number_integer()) return BigInt(v.get<long long>());
            if (v.is_string()) return parse_bigint(v.get<std::string>());
            throw ParseError("rational component must be an integer");
        };
        BigInt den = part(j[1]);
        if (den == 0) throw ParseError("zero denominator");
        return Rational(part(j[0]), den);
    }
    if (j.is_number_float()) throw ParseError("floating-point values are not accepted; use [num, den]");
    throw ParseError("cannot read rational from " + j.dump());
}

inline nlohmann::json rational_to_json(const Rational& q) {
    auto part = [](const BigInt& z) -> nlohmann::json {
        if (z >= std::numeric_limits<long long>::min() && z <= std::numeric_limits<long long>::max())
            return z.convert_to<long long>();
        return z.str();
    };
    return nlohmann::json::array({part(numerator_of(q)), part(denominator_of(q))});
}

namespace detail {

inline void read_space(const nlohmann::json& arr, std::vector<std::string>& labels, std::vector<Rational>& probs) {
    if (!arr.is_array() || arr.empty()) throw ParseError("mark space must be a nonempty array");
    for (const auto& item : arr) {
        labels.push_back(item.value("label", "m" + std::to_string(labels.size())));
        if (!item.contains("p")) throw ParseError("mark entry lacks 'p'");
        probs.push_back(rational_from_json(item.at("p")));
    }
}

inline nlohmann::json write_space(const std::vector<std::string>& labels, const std::vector<Rational>& probs) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = 0; i < probs.size(); ++i)
        arr.push_back({{"label", i < labels.size() ? labels[i] : "m" + std::to_string(i)}, {"p", rational_to_json(probs[i])}});
    return arr;
}

inline void check_schema(const nlohmann::json& j) {
    if (!j.contains("schema") || j.at("schema") != 1) throw ParseError("missing or unsupported \"schema\" (expected 1)");
}

}  // namespace detail

inline nlohmann::json to_json(const FiniteModelSpec& s) {
    auto kernel = nlohmann::json::array();
    for (const auto& v : s.kernel) kernel.push_back(rational_to_json(v));
    return {{"schema", 1},
            {"type", "finite_model"},
            {"k", s.k},
            {"vertex_space", detail::write_space(s.vertex_labels, s.vertex_probs)},
            {"edge_space", detail::write_space(s.edge_labels, s.edge_probs)},
            {"kernel", kernel}};
}

inline nlohmann::json motif_to_json(const MotifGraph& g) {
    auto edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u + 1, v + 1});
    return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

inline MotifGraph motif_from_json(const nlohmann::json& j) {
    if (j.is_string()) return resolve_motif(j.get<std::string>());
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("motif must be a name or {\"vertices\", \"edges\"}");
    std::vector<MotifGraph::Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    return MotifGraph(j.at("vertices").get<int>(), edges);
}

inline nlohmann::json to_json(const SubgraphKernelSpec& s) {
    auto table = nlohmann::json::array();
    for (const auto& row : s.connection) {
        auto r = nlohmann::json::array();
        for (const auto& h : row) r.push_back(rational_to_json(h));
        table.push_back(r);
    }
    return {{"schema", 1},
            {"type", "subgraph_kernel"},
            {"motif", motif_to_json(s.motif)},
            {"vertex_space", detail::write_space(s.vertex_labels, s.vertex_probs)},
            {"connection", table},
            {"p", rational_to_json(s.p)}};
}

inline FiniteModelSpec finite_model_from_json(const nlohmann::json& j) {
    detail::check_schema(j);
    FiniteModelSpec s;
    try {
        s.k = j.at("k").get<int>();
        detail::read_space(j.at("vertex_space"), s.vertex_labels, s.vertex_probs);
        if (j.contains("edge_space")) {
            detail::read_space(j.at("edge_space"), s.edge_labels, s.edge_probs);
        } else {
            s.edge_labels = {"e0"};
            s.edge_probs = {Rational(1)};
        }
        for (const auto& v : j.at("kernel")) s.kernel.push_back(rational_from_json(v));
        s.validate();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("finite model: ") + e.what());
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("finite model: ") + e.what());
    }
    return s;
}

inline SubgraphKernelSpec subgraph_kernel_from_json(const nlohmann::json& j) {
    detail::check_schema(j);
    SubgraphKernelSpec s;
    try {
        s.motif = motif_from_json(j.at("motif"));
        detail::read_space(j.at("vertex_space"), s.vertex_labels, s.vertex_probs);
        for (const auto& row : j.at("connection")) {
            std::vector<Rational> r;
            for (const auto& h : row) r.push_back(rational_from_json(h));
            s.connection.push_back(std::move(r));
        }
        s.p = rational_from_json(j.at("p"));
        s.validate();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("subgraph kernel: ") + e.what());
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("subgraph kernel: ") + e.what());
    }
    return s;
}

}  // namespace gustat
