#ifndef SSDEC_BITMATRIX_H
#define SSDEC_BITMATRIX_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ssdec {

using Index = std::uint32_t;

/// Dense bit-packed vector over GF(2). Bits past `size()` in the last word are always zero.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(std::size_t len);

    static BitVector from_support(std::size_t len, std::span<const Index> support);
    /// Parses a string of '0'/'1' characters.
    static BitVector from_string(std::string_view bits);

    std::size_t size() const {
        return len_;
    }
    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    bool operator[](std::size_t i) const {
        return get(i);
    }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) {
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }
    void clear();

    BitVector &operator^=(const BitVector &other);
    friend BitVector operator^(BitVector a, const BitVector &b) {
        a ^= b;
        return a;
    }
    bool operator==(const BitVector &other) const = default;

    std::size_t weight() const;
    bool is_zero() const;
    /// Parity of the bitwise AND with `other`.
    bool dot(const BitVector &other) const;
    std::vector<Index> support() const;

    BitVector slice(std::size_t begin, std::size_t end) const;
    std::string str() const;

    std::span<std::uint64_t> words() {
        return words_;
    }
    std::span<const std::uint64_t> words() const {
        return words_;
    }

   private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

BitVector concat(const BitVector &a, const BitVector &b);

/// Sparse binary matrix with both row and column adjacency. Immutable once built.
class BitMatrix {
   public:
    BitMatrix() = default;
    /// All-zero matrix.
    BitMatrix(std::size_t rows, std::size_t cols);
    /// Takes per-row column supports; each is sorted, and duplicates or out-of-range entries throw.
    BitMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<Index>> row_supports);

    static BitMatrix from_entries(std::size_t rows, std::size_t cols, std::vector<std::pair<Index, Index>> entries);
    static BitMatrix from_rows(std::size_t cols, std::span<const BitVector> rows);
    /// Dense grid literal, one string of '0'/'1' per row.
    static BitMatrix from_dense(std::span<const std::string_view> rows);
    static BitMatrix from_dense(std::initializer_list<std::string_view> rows);
    static BitMatrix identity(std::size_t n);

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    std::size_t nnz() const {
        return col_idx_.size();
    }

    std::span<const Index> row(std::size_t r) const {
        return {col_idx_.data() + row_ptr_[r], col_idx_.data() + row_ptr_[r + 1]};
    }
    std::span<const Index> col(std::size_t c) const {
        return {row_idx_.data() + col_ptr_[c], row_idx_.data() + col_ptr_[c + 1]};
    }
    bool get(std::size_t r, std::size_t c) const;

    BitVector row_vector(std::size_t r) const;
    BitVector col_vector(std::size_t c) const;
    std::vector<BitVector> row_vectors() const;

    BitMatrix transpose() const;
    bool is_zero() const {
        return nnz() == 0;
    }
    std::size_t max_row_weight() const;
    std::size_t max_col_weight() const;

    /// All (row, col) entries in row-major order.
    std::vector<std::pair<Index, Index>> entries() const;
    std::string str() const;

    bool operator==(const BitMatrix &other) const;

   private:
    void build_columns();

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<Index> col_idx_;
    std::vector<std::size_t> col_ptr_{0};
    std::vector<Index> row_idx_;
};

BitMatrix matmul(const BitMatrix &a, const BitMatrix &b);
BitVector matvec(const BitMatrix &a, const BitVector &v);
BitMatrix hstack(const BitMatrix &a, const BitMatrix &b);
BitMatrix vstack(const BitMatrix &a, const BitMatrix &b);
/// Rows of `a` restricted to the given columns, in the order listed.
BitMatrix select_columns(const BitMatrix &a, std::span<const Index> columns);

}  // namespace ssdec

#endif
