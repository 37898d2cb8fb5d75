#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.h"
#include "ssdec/codes.h"
#include "ssdec/gf2_linalg.h"

using namespace ssdec;

namespace {

std::vector<Index> identity_order(std::size_t n) {
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

}  // namespace

TEST(Rank, Examples) {
    EXPECT_EQ(rank(BitMatrix(4, 5)), 0u);
    EXPECT_EQ(rank(BitMatrix::identity(7)), 7u);
    EXPECT_EQ(rank(repetition_matrix(3)), 2u);
}

TEST(Rank, MatchesDenseOracle) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; t++) {
        std::size_t r = 1 + rng() % 32, c = 1 + rng() % 32;
        auto a = oracle::random_matrix(r, c, 0.1 + 0.4 * (t % 3) / 2.0, rng);
        EXPECT_EQ(rank(a), oracle::rank(a));
    }
}

TEST(Kernel, Examples) {
    EXPECT_EQ(kernel_basis(BitMatrix::identity(5)).rows(), 0u);
    auto k = kernel_basis(repetition_matrix(3));
    ASSERT_EQ(k.rows(), 1u);
    EXPECT_EQ(k.row_vector(0).str(), "111");
    EXPECT_EQ(kernel_basis(BitMatrix(3, 4)).rows(), 4u);
}

TEST(Kernel, RankNullityAndAnnihilation) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; t++) {
        std::size_t r = 1 + rng() % 32, c = 1 + rng() % 32;
        auto a = oracle::random_matrix(r, c, 0.3, rng);
        auto k = kernel_basis(a);
        EXPECT_EQ(rank(a) + k.rows(), c);
        EXPECT_EQ(oracle::rank(k), k.rows());
        for (std::size_t i = 0; i < k.rows(); i++) {
            EXPECT_TRUE(matvec(a, k.row_vector(i)).is_zero());
        }
    }
}

TEST(Pivot, IdentityOrders) {
    auto id = BitMatrix::identity(4);
    auto fwd = identity_order(4);
    EXPECT_EQ(pivot_with_order(id, fwd).pivot_cols, (std::vector<Index>{0, 1, 2, 3}));
    std::vector<Index> rev{3, 2, 1, 0};
    EXPECT_EQ(pivot_with_order(id, rev).pivot_cols, rev);
}

TEST(Pivot, RepetitionWithOrder) {
    std::vector<Index> order{2, 0, 1};
    EXPECT_EQ(pivot_with_order(repetition_matrix(3), order).pivot_cols, (std::vector<Index>{2, 0}));
}

TEST(Pivot, PivotsAreFirstIndependentColumnsInScanOrder) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 50; t++) {
        auto a = oracle::random_matrix(6, 10, 0.3, rng);
        auto order = identity_order(10);
        std::shuffle(order.begin(), order.end(), rng);
        auto rec = pivot_with_order(a, order);
        auto cols = oracle::transpose(oracle::to_dense(a), 10);
        oracle::Dense chosen;
        std::vector<Index> expected;
        for (auto c : order) {
            auto trial = oracle::append_row(chosen, cols[c]);
            if (oracle::rank(trial) > chosen.size()) {
                chosen = trial;
                expected.push_back(c);
            }
        }
        EXPECT_EQ(rec.pivot_cols, expected);
    }
}

TEST(Solve, Examples) {
    auto h = repetition_matrix(3);
    auto rec = pivot_with_order(h, identity_order(3));
    EXPECT_TRUE(solve_restricted(rec, BitVector(3)).is_zero());
    EXPECT_EQ(solve_restricted(rec, BitVector::from_string("110")).str(), "010");
    auto id = pivot_with_order(BitMatrix::identity(5), identity_order(5));
    auto s = BitVector::from_string("10110");
    EXPECT_EQ(solve_restricted(id, s), s);
}

TEST(Solve, InconsistentThrows) {
    auto rec = pivot_with_order(repetition_matrix(3), identity_order(3));
    EXPECT_THROW(solve_restricted(rec, BitVector::from_string("100")), InconsistentSystem);
}

TEST(Solve, RoundTrip) {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 100; t++) {
        std::size_t r = 1 + rng() % 20, c = 1 + rng() % 20;
        auto a = oracle::random_matrix(r, c, 0.3, rng);
        auto order = identity_order(c);
        std::shuffle(order.begin(), order.end(), rng);
        auto rec = pivot_with_order(a, order);
        BitVector u(c);
        for (auto p : rec.pivot_cols) {
            if (rng() & 1) {
                u.set(p);
            }
        }
        EXPECT_EQ(solve_restricted(rec, matvec(a, u)), u);
        EXPECT_EQ(in_column_space(a, matvec(a, u)), true);
    }
}

TEST(Quotient, Examples) {
    std::mt19937_64 rng(15);
    auto a = oracle::random_matrix(4, 8, 0.5, rng);
    EXPECT_EQ(quotient_basis(a, a).rows(), 0u);
    EXPECT_EQ(quotient_basis(a, BitMatrix(0, 8)).rows(), rank(a));
}

TEST(Quotient, ToricRepresentativesAreHeavyCosets) {
    auto code = toric_code(2, 1, 3);
    auto q = quotient_basis(kernel_basis(code.hx), code.hz);
    ASSERT_EQ(q.rows(), 2u);
    auto stab = oracle::to_dense(code.hz);
    for (std::size_t r = 0; r < q.rows(); r++) {
        auto rep = oracle::to_bits(q.row_vector(r));
        int best = 100;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << stab.size()); mask++) {
            auto x = rep;
            for (std::size_t j = 0; j < stab.size(); j++) {
                if ((mask >> j) & 1) {
                    for (std::size_t i = 0; i < x.size(); i++) {
                        x[i] ^= stab[j][i];
                    }
                }
            }
            best = std::min(best, oracle::weight(x));
        }
        EXPECT_GE(best, 3);
    }
}

TEST(Quotient, RowsIndependentModuloDenominator) {
    std::mt19937_64 rng(16);
    for (int t = 0; t < 50; t++) {
        auto num = oracle::random_matrix(8, 12, 0.4, rng);
        auto sub = matmul(oracle::random_matrix(3, 8, 0.4, rng), num);
        auto q = quotient_basis(num, sub);
        EXPECT_EQ(q.rows(), rank(num) - rank(sub));
        EXPECT_EQ(rank(vstack(sub, q)), rank(sub) + q.rows());
    }
}

TEST(Quotient, ContainmentViolationThrows) {
    EXPECT_THROW(quotient_basis(BitMatrix::from_dense({"10"}), BitMatrix::from_dense({"01"})), std::invalid_argument);
}

TEST(RowSpace, MatchesOracle) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; t++) {
        auto a = oracle::random_matrix(4, 9, 0.3, rng);
        auto v = oracle::random_vector(9, 0.4, rng);
        EXPECT_EQ(in_row_space(a, v), oracle::in_row_space(oracle::to_dense(a), oracle::to_bits(v)));
    }
}
