#ifndef SSDEC_DENSE_GF2_H
#define SSDEC_DENSE_GF2_H

#include <bit>
#include <cstdint>
#include <vector>

#include "ssdec/bitmatrix.h"

namespace ssdec::detail {

/// Row-major bit-packed matrix used on elimination-heavy paths.
class DenseBitRows {
   public:
    DenseBitRows() = default;
    DenseBitRows(std::size_t rows, std::size_t cols) {
        reset(rows, cols);
    }

    void reset(std::size_t rows, std::size_t cols) {
        rows_ = rows;
        cols_ = cols;
        stride_ = (cols + 63) >> 6;
        data_.assign(rows_ * stride_, 0);
    }

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    std::size_t stride() const {
        return stride_;
    }

    std::uint64_t *row(std::size_t r) {
        return data_.data() + r * stride_;
    }
    const std::uint64_t *row(std::size_t r) const {
        return data_.data() + r * stride_;
    }
    bool get(std::size_t r, std::size_t c) const {
        return (row(r)[c >> 6] >> (c & 63)) & 1;
    }
    void set(std::size_t r, std::size_t c) {
        row(r)[c >> 6] |= std::uint64_t{1} << (c & 63);
    }
    void flip(std::size_t r, std::size_t c) {
        row(r)[c >> 6] ^= std::uint64_t{1} << (c & 63);
    }
    /// dst ^= src over words [from_word, stride).
    void xor_row(std::size_t src, std::size_t dst, std::size_t from_word = 0) {
        const auto *s = row(src);
        auto *d = row(dst);
        for (std::size_t w = from_word; w < stride_; w++) {
            d[w] ^= s[w];
        }
    }

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

struct EliminationResult {
    /// pivot_rows[r] is the physical row holding the r-th pivot; pivot_cols[r] its column.
    std::vector<Index> pivot_rows;
    std::vector<Index> pivot_cols;
};

/// Gaussian elimination scanning columns 0..scan_cols-1 left to right. The pivot for
/// each column is the lowest-index row not already used as a pivot. Rows are never
/// swapped. With `full` set the pivot column is cleared from every other row (RREF),
/// otherwise only from unused rows. Columns at or beyond scan_cols ride along.
inline EliminationResult eliminate(DenseBitRows &m, std::size_t scan_cols, bool full) {
    EliminationResult res;
    std::vector<char> used(m.rows(), 0);
    std::size_t remaining = m.rows();
    for (std::size_t c = 0; c < scan_cols && remaining > 0; c++) {
        const std::size_t word = c >> 6;
        const std::uint64_t mask = std::uint64_t{1} << (c & 63);
        std::size_t pivot = m.rows();
        for (std::size_t r = 0; r < m.rows(); r++) {
            if (!used[r] && (m.row(r)[word] & mask)) {
                pivot = r;
                break;
            }
        }
        if (pivot == m.rows()) {
            continue;
        }
        used[pivot] = 1;
        remaining--;
        // Unused rows are zero on every earlier scanned column, so the pivot row is too.
        for (std::size_t r = 0; r < m.rows(); r++) {
            if (r != pivot && (m.row(r)[word] & mask) && (full || !used[r])) {
                m.xor_row(pivot, r, word);
            }
        }
        res.pivot_rows.push_back(static_cast<Index>(pivot));
        res.pivot_cols.push_back(static_cast<Index>(c));
    }
    return res;
}

/// Loads `a` with its columns permuted so that physical column k holds a.col(order[k]).
/// `extra_cols` zero columns are appended after the permuted block.
inline void load_permuted(
    DenseBitRows &out, const BitMatrix &a, const std::vector<Index> &position, std::size_t extra_cols) {
    out.reset(a.rows(), a.cols() + extra_cols);
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (auto c : a.row(r)) {
            out.set(r, position[c]);
        }
    }
}

/// Incrementally maintained echelon basis of a subspace of GF(2)^n.
class EchelonBasis {
   public:
    explicit EchelonBasis(std::size_t n) : n_(n), stride_((n + 63) >> 6) {
    }

    std::size_t dim() const {
        return leads_.size();
    }

    /// Reduces `v` in place against the basis; returns true if the result is nonzero.
    bool reduce(std::vector<std::uint64_t> &v) const {
        for (std::size_t b = 0; b < leads_.size(); b++) {
            auto lead = leads_[b];
            if ((v[lead >> 6] >> (lead & 63)) & 1) {
                const auto *src = data_.data() + b * stride_;
                for (std::size_t w = lead >> 6; w < stride_; w++) {
                    v[w] ^= src[w];
                }
            }
        }
        for (auto w : v) {
            if (w) {
                return true;
            }
        }
        return false;
    }

    /// Adds `v` if independent of the current basis. Returns whether it was added.
    bool insert(std::vector<std::uint64_t> v) {
        if (!reduce(v)) {
            return false;
        }
        std::size_t lead = 0;
        for (std::size_t w = 0; w < stride_; w++) {
            if (v[w]) {
                lead = (w << 6) + std::countr_zero(v[w]);
                break;
            }
        }
        leads_.push_back(lead);
        data_.insert(data_.end(), v.begin(), v.end());
        return true;
    }

    std::vector<std::uint64_t> pack(std::span<const Index> support) const {
        std::vector<std::uint64_t> v(stride_, 0);
        for (auto i : support) {
            v[i >> 6] |= std::uint64_t{1} << (i & 63);
        }
        return v;
    }

    std::size_t size() const {
        return n_;
    }

   private:
    std::size_t n_;
    std::size_t stride_;
    std::vector<std::size_t> leads_;
    std::vector<std::uint64_t> data_;
};

}  // namespace ssdec::detail

#endif
