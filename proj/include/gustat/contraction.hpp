#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "gustat/enumerate.hpp"
#include "gustat/errors.hpp"
#include "gustat/motif.hpp"
#include "gustat/partition.hpp"

namespace gustat {

/// Contraction of j stacked copies of a motif onto the blocks of a partition.
struct ContractionResult {
    using BlockPair = std::pair<int, int>;

    std::vector<std::vector<GridCell>> blocks;
    std::vector<BlockPair> multi_edges;   // one per (row, motif edge), smaller block first
    std::vector<BlockPair> simple_edges;  // support of multi_edges, sorted

    int vertex_count() const { return static_cast<int>(blocks.size()); }
    int edge_count() const { return static_cast<int>(simple_edges.size()); }
};

namespace detail {

inline void require_motif_width(const Partition& p, const MotifGraph& g) {
    if (p.cols() != g.vertex_count())
        throw ArgumentError("partition width does not match the motif's vertex count");
}

// e(rho_G) without materializing the block lists.
inline int contracted_edge_count(const Partition& p, const MotifGraph& g) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(p.rows() * g.edge_count()));
    for (int r = 0; r < p.rows(); ++r) {
        for (auto [u, v] : g.edges()) {
            int a = p.block_of(r * p.cols() + u);
            int b = p.block_of(r * p.cols() + v);
            if (a == b) throw ContractError("contraction would create a self-loop (flat partition)");
            pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return static_cast<int>(std::unique(pairs.begin(), pairs.end()) - pairs.begin());
}

}  // namespace detail

inline ContractionResult contract(const Partition& p, const MotifGraph& g) {
    detail::require_motif_width(p, g);
    ContractionResult out;
    out.blocks = p.blocks();
    for (int r = 0; r < p.rows(); ++r) {
        for (auto [u, v] : g.edges()) {
            int a = p.block_of(r * p.cols() + u);
            int b = p.block_of(r * p.cols() + v);
            if (a == b) throw ContractError("contraction would create a self-loop (flat partition)");
            out.multi_edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    out.simple_edges = out.multi_edges;
    std::sort(out.simple_edges.begin(), out.simple_edges.end());
    out.simple_edges.erase(std::unique(out.simple_edges.begin(), out.simple_edges.end()), out.simple_edges.end());
    return out;
}

/// Per block count r: |C(j,k,r)| and d(j,k,r) with a witness, from one CNF pass.
struct CnfProfileEntry {
    int blocks = 0;
    BigInt count = 0;
    int min_edges = 0;
    Partition witness;
};

inline std::vector<CnfProfileEntry> cnf_profile(const MotifGraph& g, int rows, int cap = kDefaultCellCap) {
    std::map<int, CnfProfileEntry> by_r;
    enumerate_cnf(rows, g.vertex_count(), std::nullopt, cap).for_each([&](const Partition& p) {
        int e = detail::contracted_edge_count(p, g);
        auto [it, fresh] = by_r.try_emplace(p.block_count());
        auto& entry = it->second;
        if (fresh) {
            entry.blocks = p.block_count();
            entry.min_edges = e;
            entry.witness = p;
        } else if (e < entry.min_edges) {
            entry.min_edges = e;
            entry.witness = p;
        }
        entry.count += 1;
    });
    std::vector<CnfProfileEntry> out;
    for (auto& [r, entry] : by_r) out.push_back(std::move(entry));
    return out;
}

// d(j,k,r) = min e(rho_G) over rho in CNF(j,k) with |rho| = r.
inline int min_edge_count(const MotifGraph& g, int rows, int r, int cap = kDefaultCellCap) {
    const int k = g.vertex_count();
    std::optional<int> best;
    enumerate_cnf(rows, k, r, cap).for_each([&](const Partition& p) {
        int e = detail::contracted_edge_count(p, g);
        if (!best || e < *best) best = e;
    });
    if (!best)
        throw DomainError("no connected non-flat partition of [" + std::to_string(rows) + "]x[" +
                          std::to_string(k) + "] has " + std::to_string(r) + " blocks");
    return *best;
}

/// Point (jk - v(rho_G), j e(G) - e(rho_G)) of the diagram Sigma_j(G).
struct DiagramPoint {
    long long x = 0;
    long long y = 0;
    Partition witness;

    friend bool operator==(const DiagramPoint& a, const DiagramPoint& b) { return a.x == b.x && a.y == b.y; }
};

// Distinct points sorted by (x, y); the witness is the first CNF partition (in
// restricted-growth order) reaching the point.
inline std::vector<DiagramPoint> sigma_diagram(const MotifGraph& g, int rows, int cap = kDefaultCellCap) {
    if (rows < 1) throw ArgumentError("sigma_diagram: j must be positive");
    const int k = g.vertex_count();
    std::map<std::pair<long long, long long>, Partition> points;
    enumerate_cnf(rows, k, std::nullopt, cap).for_each([&](const Partition& p) {
        long long x = static_cast<long long>(rows) * k - p.block_count();
        long long y = static_cast<long long>(rows) * g.edge_count() - detail::contracted_edge_count(p, g);
        points.try_emplace({x, y}, p);
    });
    std::vector<DiagramPoint> out;
    for (auto& [xy, w] : points) out.push_back({xy.first, xy.second, w});
    return out;
}

/// Upper boundary of the convex hull of a finite point set.
struct UpperHull {
    std::vector<DiagramPoint> vertices;  // strict turning points, left to right
    std::vector<DiagramPoint> on_hull;   // every input point lying on the boundary
};

// Andrew's monotone chain on integer coordinates.
inline UpperHull upper_hull(std::vector<DiagramPoint> points) {
    if (points.empty()) throw ArgumentError("upper_hull of an empty set");
    std::sort(points.begin(), points.end(),
              [](const DiagramPoint& a, const DiagramPoint& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
    points.erase(std::unique(points.begin(), points.end()), points.end());

    // Keep only the highest point per x; lower ones never touch the upper boundary.
    std::vector<DiagramPoint> tops;
    for (const auto& p : points) {
        if (!tops.empty() && tops.back().x == p.x) tops.back() = p;
        else tops.push_back(p);
    }
    auto cross = [](const DiagramPoint& o, const DiagramPoint& a, const DiagramPoint& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    UpperHull hull;
    for (const auto& p : tops) {
        while (hull.vertices.size() >= 2 &&
               cross(hull.vertices[hull.vertices.size() - 2], hull.vertices.back(), p) >= 0)
            hull.vertices.pop_back();
        hull.vertices.push_back(p);
    }
    // A point lies on the boundary iff it is collinear with the hull edge spanning its x.
    for (const auto& p : tops) {
        for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
            const auto& a = hull.vertices[i];
            if (hull.vertices.size() == 1) {
                if (p == a) hull.on_hull.push_back(p);
                break;
            }
            if (i + 1 == hull.vertices.size()) break;
            const auto& b = hull.vertices[i + 1];
            if (p.x >= a.x && p.x <= b.x) {
                if (cross(a, b, p) == 0) hull.on_hull.push_back(p);
                break;
            }
        }
    }
    return hull;
}

}  // namespace gustat
