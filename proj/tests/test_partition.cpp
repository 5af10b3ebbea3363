#include <gtest/gtest.h>

#include <random>

#include "gustat/enumerate.hpp"
#include "gustat/partition.hpp"
#include "oracles.hpp"

using namespace gustat;

namespace {

Partition from_text(const char* s, int rows, int cols) { return parse_partition_text(s, rows, cols); }

}  // namespace

TEST(Enumerate, BellCounts) {
    EXPECT_EQ(enumerate_partitions(1, 3).collect().size(), 5u);
    EXPECT_EQ(enumerate_partitions(1, 1).collect().size(), 1u);
    EXPECT_EQ(enumerate_partitions(2, 2).collect().size(), 15u);
    for (int m = 1; m <= 9; ++m)
        EXPECT_EQ(BigInt(enumerate_partitions(1, m).collect().size()), BigInt(oracle::set_partitions(m).size())) << m;
    EXPECT_EQ(bell_number(12), BigInt(4213597));
}

TEST(Enumerate, StrictlyIncreasingCodes) {
    auto all = enumerate_partitions(3, 3).collect();
    for (std::size_t i = 1; i < all.size(); ++i) ASSERT_LT(all[i - 1].code(), all[i].code());
}

TEST(Enumerate, CapError) {
    EXPECT_THROW(enumerate_partitions(4, 4), SizeLimitError);
    try {
        enumerate_partitions(13, 1);
        FAIL();
    } catch (const SizeLimitError& e) {
        EXPECT_NE(std::string(e.what()).find("Bell"), std::string::npos);
    }
    EXPECT_NO_THROW(enumerate_partitions(4, 4, 16));
}

TEST(Enumerate, FiltersMatchOracle) {
    for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= 3; ++k) {
            std::size_t nf = 0, cnf = 0;
            std::map<int, std::size_t> by_r;
            for (const auto& lab : oracle::set_partitions(j * k)) {
                if (!oracle::non_flat(lab, k)) continue;
                ++nf;
                if (oracle::connected(lab, j, k)) {
                    ++cnf;
                    ++by_r[oracle::count_blocks(lab)];
                }
            }
            EXPECT_EQ(enumerate_non_flat(j, k).collect().size(), nf) << j << "x" << k;
            EXPECT_EQ(enumerate_cnf(j, k).collect().size(), cnf) << j << "x" << k;
            for (auto [r, c] : by_r) EXPECT_EQ(enumerate_cnf(j, k, r).collect().size(), c);
        }
    }
}

TEST(Enumerate, CnfExamples) {
    auto one = enumerate_cnf(1, 3).collect();
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0], Partition::bottom(1, 3));
    auto two = enumerate_cnf(2, 2).collect();
    EXPECT_EQ(two.size(), 6u);
    EXPECT_LE(BigInt(two.size()), cnf_cardinality_bound(2, 2));
    EXPECT_EQ(cnf_cardinality_bound(2, 2), 8);
    for (const auto& p : enumerate_cnf(3, 3).collect()) {
        ASSERT_TRUE(is_non_flat(p));
        ASSERT_TRUE(is_connected(p));
    }
}

TEST(Enumerate, MaximalCount) {
    EXPECT_EQ(count_maximal_cnf(1, 5), 1);
    EXPECT_EQ(count_maximal_cnf(2, 2), 4);
    EXPECT_EQ(count_maximal_cnf(3, 2), 24);
}

TEST(Lattice, MeetJoinExamples) {
    auto rho = from_text("{(1,1)(2,2)}{(1,2)}{(2,1)}", 2, 2);
    EXPECT_EQ(meet(rho, Partition::bottom(2, 2)), Partition::bottom(2, 2));
    EXPECT_EQ(meet(rho, rho), rho);
    EXPECT_EQ(meet(Partition::row_partition(2, 2), Partition::column_partition(2, 2)), Partition::bottom(2, 2));
    EXPECT_EQ(join(rho, Partition::top(2, 2)), Partition::top(2, 2));
    EXPECT_EQ(join(rho, rho), rho);
    auto matching = from_text("{(1,1)(2,1)}{(1,2)}{(2,2)}", 2, 2);
    EXPECT_EQ(join(Partition::row_partition(2, 2), matching), Partition::top(2, 2));
    EXPECT_THROW(meet(rho, Partition::bottom(1, 4)), ArgumentError);
    EXPECT_THROW(join(rho, Partition::bottom(4, 1)), ArgumentError);
}

TEST(Lattice, LawsOnRandomPairs) {
    std::mt19937_64 rng(7);
    for (auto [j, k] : {std::pair{2, 3}, std::pair{2, 4}, std::pair{4, 2}, std::pair{1, 8}}) {
        auto all = enumerate_partitions(j, k).collect();
        auto pick = [&] { return all[rng() % all.size()]; };
        for (int t = 0; t < 200; ++t) {
            auto a = pick(), b = pick(), c = pick();
            ASSERT_EQ(meet(a, b), meet(b, a));
            ASSERT_EQ(join(a, b), join(b, a));
            ASSERT_EQ(meet(meet(a, b), c), meet(a, meet(b, c)));
            ASSERT_EQ(join(join(a, b), c), join(a, join(b, c)));
            ASSERT_EQ(meet(a, join(a, b)), a);
            ASSERT_EQ(join(a, meet(a, b)), a);
            ASSERT_TRUE(refines(meet(a, b), a));
            ASSERT_TRUE(refines(a, join(a, b)));
        }
    }
}

TEST(Predicates, NonFlat) {
    EXPECT_FALSE(is_non_flat(from_text("{(1,1)(1,2)}{(2,1)}{(2,2)}", 2, 2)));
    EXPECT_TRUE(is_non_flat(Partition::bottom(3, 4)));
    // 3 x 4 diagrams: the second joins (3,1) to (3,2)
    auto a = from_text("{(1,1)(2,1)(3,1)}{(1,3)(2,3)}{(2,2)(3,2)}{(3,3)(2,4)}{(1,2)}{(1,4)}{(3,4)}", 3, 4);
    auto b = from_text("{(1,1)(2,1)(3,1)(2,2)(3,2)}{(1,3)(2,3)}{(3,3)(2,4)}{(1,2)}{(1,4)}{(3,4)}", 3, 4);
    EXPECT_TRUE(is_non_flat(a));
    EXPECT_FALSE(is_non_flat(b));
    for (const auto& p : enumerate_partitions(2, 3).collect())
        ASSERT_EQ(is_non_flat(p), meet(p, Partition::row_partition(2, 3)) == Partition::bottom(2, 3));
}

TEST(Predicates, Connected) {
    for (const auto& p : enumerate_partitions(1, 4).collect()) EXPECT_TRUE(is_connected(p));
    EXPECT_FALSE(is_connected(Partition::bottom(2, 3)));
    auto linked = from_text(
        "{(1,1)(2,1)}{(4,2)(2,2)}{(3,2)(1,2)}{(1,3)(2,4)}{(4,1)(5,1)}{(5,2)(4,3)(3,4)(2,3)}"
        "{(1,4)}{(3,1)}{(3,3)}{(4,4)}{(5,3)}{(5,4)}",
        5, 4);
    auto split = from_text(
        "{(1,1)(2,1)(2,2)(2,3)}{(1,2)(1,3)(1,4)(2,4)}{(4,1)(5,1)}{(3,2)(4,2)}{(5,2)(5,3)(5,4)}{(4,3)(3,4)}"
        "{(3,1)}{(3,3)}{(4,4)}",
        5, 4);
    EXPECT_TRUE(is_connected(linked));
    EXPECT_TRUE(is_non_flat(linked));
    EXPECT_FALSE(is_connected(split));
    for (const auto& p : enumerate_partitions(3, 2).collect())
        ASSERT_EQ(is_connected(p), join(p, Partition::row_partition(3, 2)) == Partition::top(3, 2));
}

TEST(Text, RoundTrip) {
    for (const auto& p : enumerate_partitions(2, 3).collect()) {
        ASSERT_EQ(parse_partition_text(p.to_text(), 2, 3), p);
        ASSERT_EQ(parse_partition_code(p.code_text(), 2, 3), p);
    }
    EXPECT_EQ(from_text("{(1,1)(2,1)}{(1,2)}{(2,2)}", 2, 2).to_text(), "{(1,1)(2,1)}{(1,2)}{(2,2)}");
    EXPECT_EQ(parse_partition_text("{(2,1)(1,1)}{(1,2)}{(2,2)}").rows(), 2);
    EXPECT_THROW(parse_partition_code("1,0", 1, 2), std::exception);
    EXPECT_THROW(parse_partition_text("{(1,1)}{(1,1)(1,2)}", 1, 2), std::exception);
}

TEST(IndexMatrices, SmallMatrix) {
    IndexMatrix alpha({{26, 15, 25, 23}, {19, 23, 17, 5}, {24, 18, 12, 20}, {15, 17, 7, 2}, {2, 26, 27, 30}}, 30);
    auto p = partition_of_index_matrix(alpha);
    auto expected = from_text(
        "{(1,1)(5,2)}{(1,2)(4,1)}{(1,3)}{(1,4)(2,2)}{(2,1)}{(2,3)(4,2)}{(2,4)}{(3,1)}{(3,2)}{(3,3)}{(3,4)}{(4,3)}"
        "{(4,4)(5,1)}{(5,3)}{(5,4)}",
        5, 4);
    EXPECT_EQ(p, expected);
    EXPECT_EQ(p.block_count(), 15);
    EXPECT_TRUE(is_non_flat(p));
}

TEST(IndexMatrices, SmallExamples) {
    EXPECT_EQ(partition_of_index_matrix(IndexMatrix({{1, 2, 3}}, 3)), Partition::bottom(1, 3));
    EXPECT_EQ(partition_of_index_matrix(IndexMatrix({{1, 2}, {1, 2}}, 2)), Partition::column_partition(2, 2));
    EXPECT_THROW(IndexMatrix({{1, 1}}, 3), ArgumentError);
    EXPECT_THROW(IndexMatrix({{1, 4}}, 3), ArgumentError);
}

TEST(IndexMatrices, Counting) {
    EXPECT_EQ(count_index_matrices(Partition::bottom(1, 2), 3), 6);
    auto p5 = from_text("{(1,1)(2,1)}{(1,2)}{(1,3)}{(2,2)}{(2,3)}", 2, 3);
    EXPECT_EQ(count_index_matrices(p5, 5), factorial(5));
    EXPECT_EQ(count_index_matrices(p5, 4), 0);
    EXPECT_THROW(count_index_matrices(Partition::top(2, 2), 4), ArgumentError);
}

// Exhaustive: every j x k matrix with distinct row entries over [n], grouped by its partition.
TEST(IndexMatrices, CountMatchesExhaustive) {
    for (auto [j, k] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        for (int n = 1; n <= 5; ++n) {
            std::map<Partition, long long> seen;
            std::vector<long long> cell(static_cast<std::size_t>(j * k), 1);
            while (true) {
                bool ok = true;
                for (int r = 0; r < j && ok; ++r)
                    for (int a = 0; a < k && ok; ++a)
                        for (int b = a + 1; b < k; ++b)
                            if (cell[r * k + a] == cell[r * k + b]) ok = false;
                if (ok) {
                    std::vector<std::vector<long long>> rows(static_cast<std::size_t>(j));
                    for (int r = 0; r < j; ++r) rows[r].assign(cell.begin() + r * k, cell.begin() + (r + 1) * k);
                    ++seen[partition_of_index_matrix(IndexMatrix(rows, n))];
                }
                int d = j * k - 1;
                for (; d >= 0; --d) {
                    if (++cell[d] <= n) break;
                    cell[d] = 1;
                }
                if (d < 0) break;
            }
            for (const auto& p : enumerate_non_flat(j, k).collect()) {
                long long expect = seen.count(p) ? seen[p] : 0;
                ASSERT_EQ(count_index_matrices(p, n), expect) << p.to_text() << " n=" << n;
            }
        }
    }
}

TEST(Restrict, Rows) {
    auto p = from_text("{(1,1)(2,2)(3,1)}{(1,2)}{(2,1)(3,2)}", 3, 2);
    std::vector<int> rows{0, 2};
    EXPECT_EQ(restrict_rows(p, rows), from_text("{(1,1)(2,1)}{(1,2)}{(2,2)}", 2, 2));
}
