#include "ssdec/bitmatrix.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ssdec {

namespace {

std::size_t word_count(std::size_t bits) {
    return (bits + 63) >> 6;
}

void check_dims(bool ok, const char *what) {
    if (!ok) {
        throw std::invalid_argument(std::string("dimension mismatch in ") + what);
    }
}

}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {
}

BitVector BitVector::from_support(std::size_t len, std::span<const Index> support) {
    BitVector v(len);
    for (auto i : support) {
        if (i >= len) {
            throw std::out_of_range("BitVector support index out of range");
        }
        v.set(i);
    }
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("BitVector literal must contain only '0' and '1'");
        }
    }
    return v;
}

void BitVector::set(std::size_t i, bool value) {
    auto mask = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

void BitVector::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

BitVector &BitVector::operator^=(const BitVector &other) {
    check_dims(len_ == other.len_, "BitVector xor");
    for (std::size_t w = 0; w < words_.size(); w++) {
        words_[w] ^= other.words_[w];
    }
    return *this;
}

std::size_t BitVector::weight() const {
    std::size_t total = 0;
    for (auto w : words_) {
        total += std::popcount(w);
    }
    return total;
}

bool BitVector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) {
        return w == 0;
    });
}

bool BitVector::dot(const BitVector &other) const {
    check_dims(len_ == other.len_, "BitVector dot");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); w++) {
        acc ^= words_[w] & other.words_[w];
    }
    return std::popcount(acc) & 1;
}

std::vector<Index> BitVector::support() const {
    std::vector<Index> out;
    for (std::size_t w = 0; w < words_.size(); w++) {
        auto bits = words_[w];
        while (bits) {
            out.push_back(static_cast<Index>((w << 6) + std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

BitVector BitVector::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > len_) {
        throw std::out_of_range("BitVector slice out of range");
    }
    BitVector out(end - begin);
    for (std::size_t i = begin; i < end; i++) {
        if (get(i)) {
            out.set(i - begin);
        }
    }
    return out;
}

std::string BitVector::str() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; i++) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

BitVector concat(const BitVector &a, const BitVector &b) {
    BitVector out(a.size() + b.size());
    for (auto i : a.support()) {
        out.set(i);
    }
    for (auto i : b.support()) {
        out.set(a.size() + i);
    }
    return out;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0), col_ptr_(cols + 1, 0) {
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<Index>> row_supports)
    : rows_(rows), cols_(cols) {
    if (row_supports.size() != rows) {
        throw std::invalid_argument("BitMatrix: row support count does not match row count");
    }
    row_ptr_.assign(rows + 1, 0);
    std::size_t total = 0;
    for (auto &r : row_supports) {
        total += r.size();
    }
    col_idx_.reserve(total);
    for (std::size_t r = 0; r < rows; r++) {
        auto &sup = row_supports[r];
        std::sort(sup.begin(), sup.end());
        for (std::size_t k = 0; k < sup.size(); k++) {
            if (sup[k] >= cols) {
                throw std::out_of_range("BitMatrix: column index out of range");
            }
            if (k > 0 && sup[k] == sup[k - 1]) {
                throw std::invalid_argument("BitMatrix: duplicate entry");
            }
        }
        col_idx_.insert(col_idx_.end(), sup.begin(), sup.end());
        row_ptr_[r + 1] = col_idx_.size();
    }
    build_columns();
}

void BitMatrix::build_columns() {
    col_ptr_.assign(cols_ + 1, 0);
    for (auto c : col_idx_) {
        col_ptr_[c + 1]++;
    }
    for (std::size_t c = 0; c < cols_; c++) {
        col_ptr_[c + 1] += col_ptr_[c];
    }
    row_idx_.assign(col_idx_.size(), 0);
    std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::size_t r = 0; r < rows_; r++) {
        for (auto c : row(r)) {
            row_idx_[fill[c]++] = static_cast<Index>(r);
        }
    }
}

BitMatrix BitMatrix::from_entries(std::size_t rows, std::size_t cols, std::vector<std::pair<Index, Index>> entries) {
    std::vector<std::vector<Index>> sup(rows);
    for (auto [r, c] : entries) {
        if (r >= rows) {
            throw std::out_of_range("BitMatrix: row index out of range");
        }
        sup[r].push_back(c);
    }
    return BitMatrix(rows, cols, std::move(sup));
}

BitMatrix BitMatrix::from_rows(std::size_t cols, std::span<const BitVector> rows) {
    std::vector<std::vector<Index>> sup;
    sup.reserve(rows.size());
    for (const auto &r : rows) {
        check_dims(r.size() == cols, "BitMatrix::from_rows");
        sup.push_back(r.support());
    }
    return BitMatrix(rows.size(), cols, std::move(sup));
}

BitMatrix BitMatrix::from_dense(std::span<const std::string_view> rows) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    std::vector<BitVector> vs;
    for (auto r : rows) {
        check_dims(r.size() == cols, "BitMatrix::from_dense");
        vs.push_back(BitVector::from_string(r));
    }
    return from_rows(cols, vs);
}

BitMatrix BitMatrix::from_dense(std::initializer_list<std::string_view> rows) {
    return from_dense(std::span<const std::string_view>(rows.begin(), rows.size()));
}

BitMatrix BitMatrix::identity(std::size_t n) {
    std::vector<std::vector<Index>> sup(n);
    for (std::size_t i = 0; i < n; i++) {
        sup[i].push_back(static_cast<Index>(i));
    }
    return BitMatrix(n, n, std::move(sup));
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
    auto rr = row(r);
    return std::binary_search(rr.begin(), rr.end(), static_cast<Index>(c));
}

BitVector BitMatrix::row_vector(std::size_t r) const {
    return BitVector::from_support(cols_, row(r));
}

BitVector BitMatrix::col_vector(std::size_t c) const {
    return BitVector::from_support(rows_, col(c));
}

std::vector<BitVector> BitMatrix::row_vectors() const {
    std::vector<BitVector> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        out.push_back(row_vector(r));
    }
    return out;
}

BitMatrix BitMatrix::transpose() const {
    std::vector<std::vector<Index>> sup(cols_);
    for (std::size_t c = 0; c < cols_; c++) {
        auto cc = col(c);
        sup[c].assign(cc.begin(), cc.end());
    }
    return BitMatrix(cols_, rows_, std::move(sup));
}

std::size_t BitMatrix::max_row_weight() const {
    std::size_t m = 0;
    for (std::size_t r = 0; r < rows_; r++) {
        m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
    }
    return m;
}

std::size_t BitMatrix::max_col_weight() const {
    std::size_t m = 0;
    for (std::size_t c = 0; c < cols_; c++) {
        m = std::max(m, col_ptr_[c + 1] - col_ptr_[c]);
    }
    return m;
}

std::vector<std::pair<Index, Index>> BitMatrix::entries() const {
    std::vector<std::pair<Index, Index>> out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; r++) {
        for (auto c : row(r)) {
            out.emplace_back(static_cast<Index>(r), c);
        }
    }
    return out;
}

std::string BitMatrix::str() const {
    std::string s;
    for (std::size_t r = 0; r < rows_; r++) {
        s += row_vector(r).str();
        s += '\n';
    }
    return s;
}

bool BitMatrix::operator==(const BitMatrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_;
}

BitMatrix matmul(const BitMatrix &a, const BitMatrix &b) {
    check_dims(a.cols() == b.rows(), "matmul");
    std::vector<std::vector<Index>> sup(a.rows());
    std::vector<std::uint8_t> acc(b.cols(), 0);
    std::vector<Index> touched;
    for (std::size_t i = 0; i < a.rows(); i++) {
        touched.clear();
        for (auto j : a.row(i)) {
            for (auto k : b.row(j)) {
                if (!(acc[k] & 2)) {
                    touched.push_back(k);
                }
                acc[k] = (acc[k] ^ 1) | 2;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto k : touched) {
            if (acc[k] & 1) {
                sup[i].push_back(k);
            }
            acc[k] = 0;
        }
    }
    return BitMatrix(a.rows(), b.cols(), std::move(sup));
}

BitVector matvec(const BitMatrix &a, const BitVector &v) {
    check_dims(a.cols() == v.size(), "matvec");
    BitVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); i++) {
        bool parity = false;
        for (auto j : a.row(i)) {
            parity ^= v.get(j);
        }
        if (parity) {
            out.set(i);
        }
    }
    return out;
}

BitMatrix hstack(const BitMatrix &a, const BitMatrix &b) {
    check_dims(a.rows() == b.rows(), "hstack");
    std::vector<std::vector<Index>> sup(a.rows());
    for (std::size_t r = 0; r < a.rows(); r++) {
        auto ra = a.row(r);
        sup[r].assign(ra.begin(), ra.end());
        for (auto c : b.row(r)) {
            sup[r].push_back(static_cast<Index>(a.cols() + c));
        }
    }
    return BitMatrix(a.rows(), a.cols() + b.cols(), std::move(sup));
}

BitMatrix vstack(const BitMatrix &a, const BitMatrix &b) {
    check_dims(a.cols() == b.cols(), "vstack");
    std::vector<std::vector<Index>> sup;
    sup.reserve(a.rows() + b.rows());
    for (std::size_t r = 0; r < a.rows(); r++) {
        auto ra = a.row(r);
        sup.emplace_back(ra.begin(), ra.end());
    }
    for (std::size_t r = 0; r < b.rows(); r++) {
        auto rb = b.row(r);
        sup.emplace_back(rb.begin(), rb.end());
    }
    return BitMatrix(a.rows() + b.rows(), a.cols(), std::move(sup));
}

BitMatrix select_columns(const BitMatrix &a, std::span<const Index> columns) {
    std::vector<std::vector<Index>> sup(a.rows());
    for (std::size_t k = 0; k < columns.size(); k++) {
        for (auto r : a.col(columns[k])) {
            sup[r].push_back(static_cast<Index>(k));
        }
    }
    return BitMatrix(a.rows(), columns.size(), std::move(sup));
}

}  // namespace ssdec
