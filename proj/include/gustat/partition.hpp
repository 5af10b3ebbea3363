#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gustat/errors.hpp"
#include "gustat/rational.hpp"

namespace gustat {

// Cell (row, col) of the grid [rows] x [cols], both 1-based.
struct GridCell {
    int row = 1;
    int col = 1;

    friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

/// Set partition of the grid [rows] x [cols].
///
/// Stored as a restricted-growth string over the row-major cell order: cell t
/// belongs to block code[t], code[0] = 0 and code[t] <= 1 + max(code[0..t)).
/// Two partitions of the same grid are equal iff their codes are equal.
/// Partitions of a plain set [m] are represented on the m x 1 grid.
class Partition {
public:
    using Code = std::vector<std::uint8_t>;

    Partition() = default;

    Partition(int rows, int cols, Code code) : rows_(rows), cols_(cols), code_(std::move(code)) {
        check_dims(rows, cols);
        if (code_.size() != static_cast<std::size_t>(rows * cols))
            throw ArgumentError("partition code length does not match grid size");
        int next = 0;
        for (auto c : code_) {
            if (c > next) throw ArgumentError("partition code is not a restricted-growth string");
            if (c == next) ++next;
        }
        blocks_ = next;
    }

    // Canonicalizes arbitrary block labels (equal label = same block).
    template <typename Label>
    static Partition from_labels(int rows, int cols, std::span<const Label> labels) {
        check_dims(rows, cols);
        if (labels.size() != static_cast<std::size_t>(rows * cols))
            throw ArgumentError("label count does not match grid size");
        Code code(labels.size());
        std::vector<Label> seen;
        for (std::size_t t = 0; t < labels.size(); ++t) {
            auto it = std::find(seen.begin(), seen.end(), labels[t]);
            if (it == seen.end()) {
                code[t] = static_cast<std::uint8_t>(seen.size());
                seen.push_back(labels[t]);
            } else {
                code[t] = static_cast<std::uint8_t>(it - seen.begin());
            }
        }
        return Partition(rows, cols, std::move(code));
    }

    static Partition from_blocks(int rows, int cols, const std::vector<std::vector<GridCell>>& blocks) {
        check_dims(rows, cols);
        std::vector<int> label(static_cast<std::size_t>(rows * cols), -1);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b].empty()) throw ArgumentError("empty block");
            for (auto cell : blocks[b]) {
                if (cell.row < 1 || cell.row > rows || cell.col < 1 || cell.col > cols)
                    throw ArgumentError("cell outside the grid");
                auto& slot = label[static_cast<std::size_t>((cell.row - 1) * cols + cell.col - 1)];
                if (slot != -1) throw ArgumentError("blocks are not disjoint");
                slot = static_cast<int>(b);
            }
        }
        if (std::find(label.begin(), label.end(), -1) != label.end())
            throw ArgumentError("blocks do not cover the grid");
        return from_labels<int>(rows, cols, label);
    }

    // 0-hat: all singletons.
    static Partition bottom(int rows, int cols) {
        check_dims(rows, cols);
        Code code(static_cast<std::size_t>(rows * cols));
        std::iota(code.begin(), code.end(), std::uint8_t{0});
        return Partition(rows, cols, std::move(code));
    }

    // 1-hat: one block.
    static Partition top(int rows, int cols) {
        check_dims(rows, cols);
        return Partition(rows, cols, Code(static_cast<std::size_t>(rows * cols), 0));
    }

    // pi = {pi_1, ..., pi_rows}, pi_i the i-th row.
    static Partition row_partition(int rows, int cols) {
        check_dims(rows, cols);
        Code code(static_cast<std::size_t>(rows * cols));
        for (int t = 0; t < rows * cols; ++t) code[t] = static_cast<std::uint8_t>(t / cols);
        return Partition(rows, cols, std::move(code));
    }

    static Partition column_partition(int rows, int cols) {
        check_dims(rows, cols);
        Code code(static_cast<std::size_t>(rows * cols));
        for (int t = 0; t < rows * cols; ++t) code[t] = static_cast<std::uint8_t>(t % cols);
        return Partition(rows, cols, std::move(code));
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int cell_count() const { return rows_ * cols_; }
    int block_count() const { return blocks_; }
    const Code& code() const { return code_; }

    int block_of(int index) const { return code_[static_cast<std::size_t>(index)]; }
    int block_of(GridCell cell) const { return block_of(index_of(cell)); }
    int index_of(GridCell cell) const { return (cell.row - 1) * cols_ + (cell.col - 1); }
    GridCell cell_at(int index) const { return {index / cols_ + 1, index % cols_ + 1}; }

    bool same_ground(const Partition& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

    // Blocks in order of their first cell; cells row-major within a block.
    std::vector<std::vector<GridCell>> blocks() const {
        std::vector<std::vector<GridCell>> out(static_cast<std::size_t>(blocks_));
        for (int t = 0; t < cell_count(); ++t) out[code_[t]].push_back(cell_at(t));
        return out;
    }

    // "{(1,1)(2,1)}{(1,2)}"
    std::string to_text() const {
        std::ostringstream os;
        for (const auto& block : blocks()) {
            os << '{';
            for (auto c : block) os << '(' << c.row << ',' << c.col << ')';
            os << '}';
        }
        return os.str();
    }

    // "0,0,1"
    std::string code_text() const {
        std::string out;
        for (std::size_t t = 0; t < code_.size(); ++t) {
            if (t) out += ',';
            out += std::to_string(code_[t]);
        }
        return out;
    }

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.code_ == b.code_;
    }
    friend auto operator<=>(const Partition& a, const Partition& b) {
        if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
        if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
        return a.code_ <=> b.code_;
    }

private:
    static void check_dims(int rows, int cols) {
        if (rows < 1 || cols < 1) throw ArgumentError("grid dimensions must be positive");
        if (rows * cols > 255) throw SizeLimitError("grid has more than 255 cells");
    }

    int rows_ = 1;
    int cols_ = 1;
    int blocks_ = 1;
    Code code_{0};
};

namespace detail {

struct DisjointSets {
    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
    std::vector<int> parent;
};

inline void require_same_ground(const Partition& a, const Partition& b) {
    if (!a.same_ground(b)) throw ArgumentError("partitions live on different ground sets");
}

}  // namespace detail

// a ^ b: blocks are the nonempty intersections of a-blocks with b-blocks.
inline Partition meet(const Partition& a, const Partition& b) {
    detail::require_same_ground(a, b);
    std::vector<int> labels(static_cast<std::size_t>(a.cell_count()));
    for (int t = 0; t < a.cell_count(); ++t) labels[t] = a.block_of(t) * 256 + b.block_of(t);
    return Partition::from_labels<int>(a.rows(), a.cols(), labels);
}

// a v b: connected components of the union of the two block relations.
inline Partition join(const Partition& a, const Partition& b) {
    detail::require_same_ground(a, b);
    const int n = a.cell_count();
    detail::DisjointSets sets(n);
    std::vector<int> first_a(256, -1), first_b(256, -1);
    for (int t = 0; t < n; ++t) {
        auto& fa = first_a[a.block_of(t)];
        if (fa < 0) fa = t; else sets.unite(fa, t);
        auto& fb = first_b[b.block_of(t)];
        if (fb < 0) fb = t; else sets.unite(fb, t);
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) labels[t] = sets.find(t);
    return Partition::from_labels<int>(a.rows(), a.cols(), labels);
}

// a is finer than (or equal to) b.
inline bool refines(const Partition& a, const Partition& b) {
    detail::require_same_ground(a, b);
    std::vector<int> image(256, -1);
    for (int t = 0; t < a.cell_count(); ++t) {
        auto& img = image[a.block_of(t)];
        if (img < 0) img = b.block_of(t);
        else if (img != b.block_of(t)) return false;
    }
    return true;
}

// No block holds two cells of one row, i.e. p ^ pi = 0-hat.
inline bool is_non_flat(const Partition& p) {
    bool result = true;
    std::vector<int> stamp(256, -1);
    for (int r = 0; r < p.rows() && result; ++r) {
        for (int c = 0; c < p.cols(); ++c) {
            int b = p.block_of(r * p.cols() + c);
            if (stamp[b] == r) { result = false; break; }
            stamp[b] = r;
        }
    }
#ifdef GUSTAT_DEBUG_CHECKS
    assert(result == (meet(p, Partition::row_partition(p.rows(), p.cols())) ==
                      Partition::bottom(p.rows(), p.cols())));
#endif
    return result;
}

// Rows are linked into one component through shared blocks, i.e. p v pi = 1-hat.
inline bool is_connected(const Partition& p) {
    detail::DisjointSets rows(p.rows());
    std::vector<int> owner(256, -1);
    int components = p.rows();
    for (int t = 0; t < p.cell_count(); ++t) {
        int b = p.block_of(t);
        int r = t / p.cols();
        if (owner[b] < 0) owner[b] = r;
        else if (rows.unite(owner[b], r)) --components;
    }
    return components == 1;
}

// Restriction of p to the given rows (in the given order), recanonicalized.
inline Partition restrict_rows(const Partition& p, std::span<const int> row_indices) {
    std::vector<int> labels;
    labels.reserve(row_indices.size() * static_cast<std::size_t>(p.cols()));
    for (int r : row_indices)
        for (int c = 0; c < p.cols(); ++c) labels.push_back(p.block_of(r * p.cols() + c));
    return Partition::from_labels<int>(static_cast<int>(row_indices.size()), p.cols(), labels);
}

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline int read_int(std::string_view s, std::size_t& i) {
    skip_ws(s, i);
    std::size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (start == i) throw ParseError("expected integer in partition text");
    return std::stoi(std::string(s.substr(start, i - start)));
}

inline void expect(std::string_view s, std::size_t& i, char ch) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ch)
        throw ParseError(std::string("expected '") + ch + "' in partition text");
    ++i;
}

}  // namespace detail

// Parses "{(1,1)(2,1)}{(1,2)}". Grid dimensions default to the largest row and
// column mentioned.
inline Partition parse_partition_text(std::string_view text, int rows = 0, int cols = 0) {
    std::vector<std::vector<GridCell>> blocks;
    std::size_t i = 0;
    int max_row = 0, max_col = 0;
    detail::skip_ws(text, i);
    while (i < text.size()) {
        detail::expect(text, i, '{');
        std::vector<GridCell> block;
        detail::skip_ws(text, i);
        while (i < text.size() && text[i] == '(') {
            ++i;
            GridCell cell;
            cell.row = detail::read_int(text, i);
            detail::expect(text, i, ',');
            cell.col = detail::read_int(text, i);
            detail::expect(text, i, ')');
            max_row = std::max(max_row, cell.row);
            max_col = std::max(max_col, cell.col);
            block.push_back(cell);
            detail::skip_ws(text, i);
        }
        detail::expect(text, i, '}');
        blocks.push_back(std::move(block));
        detail::skip_ws(text, i);
    }
    if (blocks.empty()) throw ParseError("empty partition text");
    if (rows == 0) rows = max_row;
    if (cols == 0) cols = max_col;
    try {
        return Partition::from_blocks(rows, cols, blocks);
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("invalid partition: ") + e.what());
    }
}

// Parses a comma-separated restricted-growth code for the given grid.
inline Partition parse_partition_code(std::string_view text, int rows, int cols) {
    Partition::Code code;
    std::size_t i = 0;
    while (true) {
        code.push_back(static_cast<std::uint8_t>(detail::read_int(text, i)));
        detail::skip_ws(text, i);
        if (i >= text.size()) break;
        detail::expect(text, i, ',');
    }
    try {
        return Partition(rows, cols, std::move(code));
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("invalid partition code: ") + e.what());
    }
}

/// j x k matrix of indices in [n] with pairwise distinct entries in each row.
class IndexMatrix {
public:
    IndexMatrix(std::vector<std::vector<long long>> rows, long long n) : rows_(std::move(rows)), n_(n) {
        if (rows_.empty() || rows_.front().empty()) throw ArgumentError("index matrix must be nonempty");
        const auto width = rows_.front().size();
        for (const auto& row : rows_) {
            if (row.size() != width) throw ArgumentError("index matrix rows differ in length");
            for (std::size_t a = 0; a < row.size(); ++a) {
                if (row[a] < 1 || row[a] > n_) throw ArgumentError("index outside [1..n]");
                for (std::size_t b = 0; b < a; ++b)
                    if (row[a] == row[b]) throw ArgumentError("repeated index within a row");
            }
        }
    }

    int rows() const { return static_cast<int>(rows_.size()); }
    int cols() const { return static_cast<int>(rows_.front().size()); }
    long long n() const { return n_; }
    long long at(int row, int col) const { return rows_[row][col]; }

private:
    std::vector<std::vector<long long>> rows_;
    long long n_;
};

// Groups equal entries into blocks; non-flat because rows have distinct entries.
inline Partition partition_of_index_matrix(const IndexMatrix& a) {
    std::vector<long long> labels;
    labels.reserve(static_cast<std::size_t>(a.rows() * a.cols()));
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) labels.push_back(a.at(r, c));
    return Partition::from_labels<long long>(a.rows(), a.cols(), labels);
}

// Number of index matrices alpha with partition_of_index_matrix(alpha) == p:
// one distinct index per block, n!/(n-|p|)!.
inline BigInt count_index_matrices(const Partition& p, long long n) {
    if (!is_non_flat(p)) throw ArgumentError("count_index_matrices requires a non-flat partition");
    if (n < 0) throw ArgumentError("population size must be nonnegative");
    return falling_factorial(n, p.block_count());
}

}  // namespace gustat
