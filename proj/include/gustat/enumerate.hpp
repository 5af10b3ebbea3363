#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gustat/errors.hpp"
#include "gustat/partition.hpp"
#include "gustat/rational.hpp"

namespace gustat {

inline constexpr int kDefaultCellCap = 12;

// Bell number B(m) via the Bell triangle.
inline BigInt bell_number(int m) {
    if (m < 0) throw ArgumentError("bell_number: negative argument");
    std::vector<BigInt> row{BigInt(1)};
    for (int i = 0; i < m; ++i) {
        std::vector<BigInt> next{row.back()};
        for (const auto& v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

inline void check_cell_cap(int rows, int cols, int cap) {
    if (rows < 1 || cols < 1) throw ArgumentError("grid dimensions must be positive");
    if (rows * cols > cap)
        throw SizeLimitError("grid " + std::to_string(rows) + "x" + std::to_string(cols) + " has " +
                             std::to_string(rows * cols) + " cells, above the cap of " + std::to_string(cap) +
                             " (Bell(" + std::to_string(rows * cols) + ") = " +
                             bell_number(rows * cols).str() + " partitions)");
}

struct EnumerationOptions {
    bool non_flat_only = false;
    bool connected_only = false;
    std::optional<int> block_count;
    int cap = kDefaultCellCap;
};

/// Streams partitions of [rows] x [cols] in lexicographic restricted-growth
/// order. Non-flatness and the block count are enforced while the code is
/// built; connectivity is filtered on completion.
class PartitionEnumerator {
public:
    PartitionEnumerator(int rows, int cols, EnumerationOptions options = {})
        : rows_(rows), cols_(cols), cells_(rows * cols), opts_(options) {
        check_cell_cap(rows, cols, opts_.cap);
        if (opts_.non_flat_only && cols_ > 64) throw SizeLimitError("too many columns");
        if (rows_ > 64) throw SizeLimitError("too many rows for the row masks");
        code_.assign(static_cast<std::size_t>(cells_), 0);
        used_.assign(static_cast<std::size_t>(cells_), 0);
        row_mask_.assign(static_cast<std::size_t>(cells_), 0);
        if (opts_.block_count && (*opts_.block_count < 1 || *opts_.block_count > cells_)) done_ = true;
    }

    std::optional<Partition> next() {
        while (!done_) {
            if (!step()) {
                done_ = true;
                break;
            }
            Partition p(rows_, cols_, Partition::Code(code_.begin(), code_.end()));
            if (opts_.connected_only && !is_connected(p)) continue;
            return p;
        }
        return std::nullopt;
    }

    template <typename Visitor>
    void for_each(Visitor&& visit) {
        while (auto p = next()) visit(*p);
    }

    std::vector<Partition> collect() {
        std::vector<Partition> out;
        for_each([&](const Partition& p) { out.push_back(p); });
        return out;
    }

private:
    int row_of(int t) const { return t / cols_; }

    int blocks_before(int t) const { return t == 0 ? 0 : used_[t - 1]; }

    bool allowed(int t, int value) const {
        if (opts_.non_flat_only && value < blocks_before(t) &&
            (row_mask_[value] >> row_of(t) & 1u))
            return false;
        if (opts_.block_count) {
            int used = std::max(blocks_before(t), value + 1);
            int remaining = cells_ - 1 - t;
            if (used > *opts_.block_count || used + remaining < *opts_.block_count) return false;
        }
        return true;
    }

    void place(int t, int value) {
        code_[t] = static_cast<std::uint8_t>(value);
        used_[t] = std::max(blocks_before(t), value + 1);
        row_mask_[value] |= (std::uint64_t{1} << row_of(t));
    }

    void unplace(int t) {
        // Non-flat codes never repeat a row inside a block, so clearing is exact;
        // for unrestricted codes the masks are unused.
        if (opts_.non_flat_only) row_mask_[code_[t]] &= ~(std::uint64_t{1} << row_of(t));
    }

    // Finds the smallest allowed value at t strictly above `from`.
    bool advance_at(int t, int from) {
        for (int v = from + 1; v <= blocks_before(t); ++v) {
            if (allowed(t, v)) {
                place(t, v);
                return true;
            }
        }
        return false;
    }

    // Moves to the next complete code; false when exhausted.
    bool step() {
        int t = 0;
        int from = -1;
        if (!started_) {
            started_ = true;
        } else {
            t = cells_ - 1;
            unplace(t);
            from = code_[t];
        }
        while (true) {
            if (advance_at(t, from)) {
                if (t == cells_ - 1) return true;
                ++t;
                from = -1;
            } else {
                if (--t < 0) return false;
                unplace(t);
                from = code_[t];
            }
        }
    }

    int rows_, cols_, cells_;
    EnumerationOptions opts_;
    std::vector<std::uint8_t> code_;
    std::vector<int> used_;
    std::vector<std::uint64_t> row_mask_;
    bool started_ = false;
    bool done_ = false;
};

inline PartitionEnumerator enumerate_partitions(int rows, int cols, int cap = kDefaultCellCap) {
    EnumerationOptions o;
    o.cap = cap;
    return PartitionEnumerator(rows, cols, o);
}

inline PartitionEnumerator enumerate_non_flat(int rows, int cols, int cap = kDefaultCellCap) {
    EnumerationOptions o;
    o.non_flat_only = true;
    o.cap = cap;
    return PartitionEnumerator(rows, cols, o);
}

// CNF(j,k), or C(j,k,r) when a block count is given.
inline PartitionEnumerator enumerate_cnf(int rows, int cols, std::optional<int> block_count = std::nullopt,
                                         int cap = kDefaultCellCap) {
    EnumerationOptions o;
    o.non_flat_only = true;
    o.connected_only = true;
    o.block_count = block_count;
    o.cap = cap;
    return PartitionEnumerator(rows, cols, o);
}

// j!^k k!^(j-1), the cardinality bound for CNF(j,k).
inline BigInt cnf_cardinality_bound(int rows, int cols) {
    return ipow(factorial(rows), static_cast<unsigned>(cols)) * ipow(factorial(cols), static_cast<unsigned>(rows - 1));
}

// k^(j-1) prod_{i=1}^{j-1} (1 + (k-1) i), the number of maximal connected
// non-flat partitions of [j] x [k].
inline BigInt count_maximal_cnf(int rows, int cols) {
    if (rows < 1 || cols < 1) throw ArgumentError("grid dimensions must be positive");
    BigInt out = ipow(BigInt(cols), static_cast<unsigned>(rows - 1));
    for (int i = 1; i <= rows - 1; ++i) out *= (1 + static_cast<long long>(cols - 1) * i);
    return out;
}

}  // namespace gustat
