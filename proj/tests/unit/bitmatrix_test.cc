#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "oracles.h"
#include "ssdec/bitmatrix.h"
#include "ssdec/codes.h"

using namespace ssdec;

TEST(BitVector, SetFlipWeight) {
    BitVector v(130);
    v.set(0);
    v.set(64);
    v.set(129);
    EXPECT_EQ(v.weight(), 3u);
    v.flip(64);
    EXPECT_EQ(v.weight(), 2u);
    EXPECT_EQ(v.support(), (std::vector<Index>{0, 129}));
    v.set(0, false);
    v.flip(129);
    EXPECT_TRUE(v.is_zero());
}

TEST(BitVector, StringRoundTrip) {
    auto v = BitVector::from_string("1011001");
    EXPECT_EQ(v.str(), "1011001");
    EXPECT_EQ(v.size(), 7u);
    EXPECT_EQ(v.slice(2, 5).str(), "110");
    EXPECT_EQ(concat(v, BitVector::from_string("01")).str(), "101100101");
}

TEST(BitVector, XorAndDot) {
    auto a = BitVector::from_string("1100");
    auto b = BitVector::from_string("1010");
    EXPECT_EQ((a ^ b).str(), "0110");
    EXPECT_TRUE(a.dot(b));
    EXPECT_FALSE(a.dot(BitVector::from_string("1111")));
}

TEST(BitMatrix, ConstructionRejectsBadSupports) {
    EXPECT_THROW(BitMatrix(2, 3, {{0, 3}, {}}), std::out_of_range);
    EXPECT_THROW(BitMatrix(2, 3, {{1, 1}, {}}), std::invalid_argument);
    EXPECT_THROW(BitMatrix(2, 3, {{1}}), std::invalid_argument);
}

TEST(BitMatrix, RowAndColumnAdjacencyAgree) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; t++) {
        auto m = oracle::random_matrix(9, 13, 0.3, rng);
        for (std::size_t r = 0; r < m.rows(); r++) {
            for (auto c : m.row(r)) {
                auto col = m.col(c);
                EXPECT_NE(std::find(col.begin(), col.end(), r), col.end());
            }
        }
        EXPECT_EQ(m.transpose().transpose(), m);
        EXPECT_EQ(m.transpose().nnz(), m.nnz());
    }
}

TEST(BitMatrix, IdentityTimesAIsA) {
    std::mt19937_64 rng(1);
    auto a = oracle::random_matrix(3, 5, 0.5, rng);
    EXPECT_EQ(matmul(BitMatrix::identity(3), a), a);
}

TEST(BitMatrix, TimesZeroIsZero) {
    std::mt19937_64 rng(2);
    auto a = oracle::random_matrix(4, 6, 0.5, rng);
    EXPECT_TRUE(matmul(a, BitMatrix(6, 3)).is_zero());
}

TEST(BitMatrix, MatmulMatchesDenseOracle) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; t++) {
        auto a = oracle::random_matrix(7, 11, 0.3, rng);
        auto b = oracle::random_matrix(11, 5, 0.3, rng);
        auto expected = oracle::multiply(oracle::to_dense(a), oracle::to_dense(b), 11, 5);
        EXPECT_EQ(oracle::to_dense(matmul(a, b)), expected);
    }
}

TEST(BitMatrix, MatmulDimensionMismatchThrows) {
    EXPECT_THROW(matmul(BitMatrix(2, 3), BitMatrix(2, 3)), std::invalid_argument);
    EXPECT_THROW(matvec(BitMatrix(2, 3), BitVector(2)), std::invalid_argument);
}

TEST(BitMatrix, ZeroVectorAndIdentity) {
    std::mt19937_64 rng(4);
    auto a = oracle::random_matrix(5, 8, 0.4, rng);
    EXPECT_TRUE(matvec(a, BitVector(8)).is_zero());
    auto v = oracle::random_vector(8, 0.5, rng);
    EXPECT_EQ(matvec(BitMatrix::identity(8), v), v);
}

TEST(BitMatrix, RepetitionMatvecHandEvaluation) {
    auto h = repetition_matrix(3);
    EXPECT_EQ(matvec(h, BitVector::from_string("100")).str(), "101");
}

TEST(BitMatrix, MatvecMatchesDenseOracle) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; t++) {
        auto a = oracle::random_matrix(10, 70, 0.2, rng);
        auto v = oracle::random_vector(70, 0.3, rng);
        EXPECT_EQ(oracle::to_bits(matvec(a, v)), oracle::apply(oracle::to_dense(a), oracle::to_bits(v)));
    }
}

TEST(BitMatrix, StackingAndSelection) {
    auto a = BitMatrix::from_dense({"10", "01"});
    auto b = BitMatrix::from_dense({"11", "00"});
    EXPECT_EQ(hstack(a, b), BitMatrix::from_dense({"1011", "0100"}));
    EXPECT_EQ(vstack(a, b), BitMatrix::from_dense({"10", "01", "11", "00"}));
    std::vector<Index> cols{3, 0};
    EXPECT_EQ(select_columns(hstack(a, b), cols), BitMatrix::from_dense({"11", "00"}));
}

TEST(BitMatrix, FromEntriesAndRows) {
    auto m = BitMatrix::from_entries(2, 3, {{1, 2}, {0, 0}});
    EXPECT_TRUE(m.get(0, 0));
    EXPECT_TRUE(m.get(1, 2));
    EXPECT_FALSE(m.get(1, 1));
    auto rows = m.row_vectors();
    EXPECT_EQ(BitMatrix::from_rows(3, rows), m);
    EXPECT_EQ(m.col_vector(2).str(), "01");
}
