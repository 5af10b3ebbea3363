#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gustat/errors.hpp"

namespace gustat {

inline constexpr int kMaxMotifVertices = 8;

/// Finite simple graph on vertices 0..k-1 (printed 1-based).
class MotifGraph {
public:
    using Edge = std::pair<int, int>;

    MotifGraph() = default;

    MotifGraph(int vertex_count, std::vector<Edge> edges) : k_(vertex_count) {
        if (k_ < 1) throw ArgumentError("motif needs at least one vertex");
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= k_ || v >= k_) throw ArgumentError("edge endpoint out of range");
            if (u == v) throw ArgumentError("self-loops are not allowed");
            edges_.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        adj_.assign(static_cast<std::size_t>(k_ * k_), false);
        for (auto [u, v] : edges_) adj_[u * k_ + v] = adj_[v * k_ + u] = true;
    }

    int vertex_count() const { return k_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    bool adjacent(int u, int v) const { return adj_[u * k_ + v]; }

    int degree(int u) const {
        int d = 0;
        for (int v = 0; v < k_; ++v) d += adjacent(u, v);
        return d;
    }

    bool is_connected() const {
        std::vector<int> stack{0};
        std::vector<bool> seen(static_cast<std::size_t>(k_), false);
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < k_; ++v)
                if (adjacent(u, v) && !seen[v]) {
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
        }
        return count == k_;
    }

    friend bool operator==(const MotifGraph& a, const MotifGraph& b) {
        return a.k_ == b.k_ && a.edges_ == b.edges_;
    }

private:
    int k_ = 1;
    std::vector<Edge> edges_;
    std::vector<bool> adj_{false};
};

inline MotifGraph path_graph(int k) {
    std::vector<MotifGraph::Edge> e;
    for (int i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1);
    return MotifGraph(k, e);
}

inline MotifGraph cycle_graph(int k) {
    if (k < 3) throw ArgumentError("cycles need at least 3 vertices");
    auto e = path_graph(k).edges();
    e.emplace_back(0, k - 1);
    return MotifGraph(k, e);
}

inline MotifGraph complete_graph(int k) {
    std::vector<MotifGraph::Edge> e;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) e.emplace_back(u, v);
    return MotifGraph(k, e);
}

// Star on k vertices: center 0 joined to k-1 leaves.
inline MotifGraph star_graph(int k) {
    std::vector<MotifGraph::Edge> e;
    for (int v = 1; v < k; ++v) e.emplace_back(0, v);
    return MotifGraph(k, e);
}

// Edge-list text, one "u v" pair per line, 1-indexed. '#' starts a comment.
// The vertex count is the largest label unless a "vertices <k>" line is given.
inline MotifGraph parse_edge_list(std::istream& in) {
    std::vector<MotifGraph::Edge> edges;
    int k = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "vertices") {
            if (!(ls >> k)) throw ParseError("bad vertices line " + std::to_string(lineno));
            continue;
        }
        int u = 0, v = 0;
        try {
            u = std::stoi(first);
        } catch (const std::exception&) {
            throw ParseError("bad edge on line " + std::to_string(lineno));
        }
        if (!(ls >> v) || u < 1 || v < 1) throw ParseError("bad edge on line " + std::to_string(lineno));
        edges.emplace_back(u - 1, v - 1);
        k = std::max({k, u, v});
    }
    if (k == 0) throw ParseError("empty edge list");
    try {
        return MotifGraph(k, edges);
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
}

namespace detail {

inline bool parse_suffix(const std::string& name, const std::string& prefix, int& k) {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return false;
    auto rest = name.substr(prefix.size());
    if (rest.find_first_not_of("0123456789") != std::string::npos) return false;
    k = std::stoi(rest);
    return true;
}

}  // namespace detail

// Built-in names ("triangle", "path<k>", "cycle<k>", "complete<k>",
// "star<k>", k = vertex count) or a path to an edge-list file.
inline MotifGraph resolve_motif(const std::string& name) {
    int k = 0;
    if (name == "triangle") return complete_graph(3);
    if (name == "edge") return complete_graph(2);
    auto bounded = [&](int kk) {
        if (kk < 1 || kk > kMaxMotifVertices)
            throw ArgumentError("built-in motif size must be in 1.." + std::to_string(kMaxMotifVertices));
        return kk;
    };
    if (detail::parse_suffix(name, "path", k)) return path_graph(bounded(k));
    if (detail::parse_suffix(name, "cycle", k)) return cycle_graph(bounded(k));
    if (detail::parse_suffix(name, "complete", k)) return complete_graph(bounded(k));
    if (detail::parse_suffix(name, "star", k)) return star_graph(bounded(k));
    std::ifstream in(name);
    if (!in) throw ArgumentError("unknown motif '" + name + "'");
    return parse_edge_list(in);
}

// |Aut(g)| by brute force over vertex permutations.
inline long long automorphism_count(const MotifGraph& g) {
    const int k = g.vertex_count();
    if (k > kMaxMotifVertices)
        throw SizeLimitError("automorphism_count: more than " + std::to_string(kMaxMotifVertices) + " vertices");
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    long long count = 0;
    do {
        bool ok = true;
        for (auto [u, v] : g.edges())
            if (!g.adjacent(perm[u], perm[v])) { ok = false; break; }
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

// e(H)/(v(H)-1) <= e(G)/(v(G)-1) for every subgraph H with v(H) >= 2. Induced
// subgraphs maximize the ratio for a fixed vertex set, so those suffice.
inline bool is_strongly_balanced(const MotifGraph& g) {
    const int k = g.vertex_count();
    if (k < 2) throw ArgumentError("strong balance needs at least two vertices");
    if (k > 20) throw SizeLimitError("strong balance check limited to 20 vertices");
    if (!g.is_connected()) throw ArgumentError("strong balance is defined for connected graphs");
    const long long e = g.edge_count();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        int v = __builtin_popcount(mask);
        if (v < 2) continue;
        long long eh = 0;
        for (auto [a, b] : g.edges()) eh += ((mask >> a) & 1u) && ((mask >> b) & 1u);
        if (eh * (k - 1) > e * (v - 1)) return false;
    }
    return true;
}

inline std::string edge_list_text(const MotifGraph& g) {
    std::ostringstream os;
    os << "vertices " << g.vertex_count() << '\n';
    for (auto [u, v] : g.edges()) os << u + 1 << ' ' << v + 1 << '\n';
    return os.str();
}

}  // namespace gustat
