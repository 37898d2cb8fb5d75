#include "ssdec/chain_complex.h"

#include <algorithm>
#include <string>

#include "ssdec/gf2_linalg.h"

namespace ssdec {

ChainComplex::ChainComplex(std::vector<std::size_t> dims, std::vector<BitMatrix> boundaries)
    : dims_(std::move(dims)), boundaries_(std::move(boundaries)) {
    if (dims_.empty()) {
        throw std::invalid_argument("ChainComplex needs at least one space");
    }
    if (boundaries_.size() + 1 != dims_.size()) {
        throw ChainComplexError(0, "ChainComplex: expected one boundary map per positive degree");
    }
    for (std::size_t i = 1; i < dims_.size(); i++) {
        const auto &d = boundaries_[i - 1];
        if (d.rows() != dims_[i - 1] || d.cols() != dims_[i]) {
            throw ChainComplexError(i, "ChainComplex: boundary d_" + std::to_string(i) + " has the wrong shape");
        }
    }
}

ChainComplex ChainComplex::from_check_matrix(const BitMatrix &h) {
    return ChainComplex({h.rows(), h.cols()}, {h});
}

BitMatrix ChainComplex::boundary(std::size_t i) const {
    if (i == 0) {
        return BitMatrix(0, dims_[0]);
    }
    if (i == dims_.size()) {
        return BitMatrix(dims_.back(), 0);
    }
    return boundaries_.at(i - 1);
}

ChainComplex ChainComplex::dual() const {
    auto l = length();
    std::vector<std::size_t> dims(dims_.rbegin(), dims_.rend());
    std::vector<BitMatrix> maps;
    // New d_i : C_{l-i} -> C_{l-i+1} is the transpose of old d_{l-i+1}.
    for (std::size_t i = 1; i <= l; i++) {
        maps.push_back(boundaries_[l - i].transpose());
    }
    return ChainComplex(std::move(dims), std::move(maps));
}

void validate(const ChainComplex &c) {
    for (std::size_t i = 1; i < c.length(); i++) {
        if (!matmul(c.stored_boundary(i), c.stored_boundary(i + 1)).is_zero()) {
            throw ChainComplexError(i, "boundary condition fails: d_" + std::to_string(i) + " d_" +
                                           std::to_string(i + 1) + " != 0");
        }
    }
}

const BasisIndexing::Block &BasisIndexing::block(std::size_t i, std::size_t j) const {
    for (const auto &b : degrees.at(i)) {
        if (b.j == j) {
            return b;
        }
    }
    throw std::out_of_range("BasisIndexing: no such block");
}

std::size_t BasisIndexing::index(std::size_t i, std::size_t j, std::size_t b, std::size_t c) const {
    const auto &blk = block(i, j);
    return blk.offset + b * blk.dim_c + c;
}

TensorProduct tensor(const ChainComplex &b, const ChainComplex &c) {
    auto lb = b.length();
    auto lc = c.length();
    auto l = lb + lc;
    BasisIndexing idx;
    idx.degrees.resize(l + 1);
    std::vector<std::size_t> dims(l + 1, 0);
    for (std::size_t i = 0; i <= l; i++) {
        std::size_t j_lo = i > lc ? i - lc : 0;
        std::size_t j_hi = std::min(i, lb);
        std::size_t offset = 0;
        for (std::size_t j = j_lo; j <= j_hi; j++) {
            std::size_t k = i - j;
            idx.degrees[i].push_back({j, k, offset, b.dim(j), c.dim(k)});
            offset += b.dim(j) * c.dim(k);
        }
        dims[i] = offset;
    }

    std::vector<BitMatrix> maps;
    for (std::size_t i = 1; i <= l; i++) {
        std::vector<std::vector<Index>> cols(dims[i]);
        for (const auto &blk : idx.degrees[i]) {
            // d(x (x) y) = d^B x (x) y + x (x) d^C y.
            for (std::size_t x = 0; x < blk.dim_b; x++) {
                for (std::size_t y = 0; y < blk.dim_c; y++) {
                    auto &col = cols[blk.offset + x * blk.dim_c + y];
                    if (blk.j >= 1) {
                        const auto &target = idx.block(i - 1, blk.j - 1);
                        for (auto r : b.stored_boundary(blk.j).col(x)) {
                            col.push_back(static_cast<Index>(target.offset + r * target.dim_c + y));
                        }
                    }
                    if (blk.k >= 1) {
                        const auto &target = idx.block(i - 1, blk.j);
                        for (auto r : c.stored_boundary(blk.k).col(y)) {
                            col.push_back(static_cast<Index>(target.offset + x * target.dim_c + r));
                        }
                    }
                }
            }
        }
        maps.push_back(BitMatrix(dims[i], dims[i - 1], std::move(cols)).transpose());
    }
    return TensorProduct{ChainComplex(std::move(dims), std::move(maps)), std::move(idx)};
}

std::size_t homology_rank(const ChainComplex &c, std::size_t i) {
    if (i > c.length()) {
        throw std::out_of_range("homology_rank: degree out of range");
    }
    std::size_t rank_in = i >= 1 ? rank(c.stored_boundary(i)) : 0;
    std::size_t rank_out = i < c.length() ? rank(c.stored_boundary(i + 1)) : 0;
    return c.dim(i) - rank_in - rank_out;
}

std::size_t cohomology_rank(const ChainComplex &c, std::size_t i) {
    // Ranks are transpose invariant, so cohomology and homology ranks agree over a field.
    return homology_rank(c, i);
}

std::vector<std::size_t> homology_ranks(const ChainComplex &c) {
    std::vector<std::size_t> ranks_of_maps(c.length() + 2, 0);
    for (std::size_t i = 1; i <= c.length(); i++) {
        ranks_of_maps[i] = rank(c.stored_boundary(i));
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i <= c.length(); i++) {
        out.push_back(c.dim(i) - ranks_of_maps[i] - ranks_of_maps[i + 1]);
    }
    return out;
}

std::size_t kunneth_rank(std::span<const std::size_t> rb, std::span<const std::size_t> rc, std::size_t i) {
    std::size_t total = 0;
    for (std::size_t j = 0; j < rb.size(); j++) {
        if (j <= i && i - j < rc.size()) {
            total += rb[j] * rc[i - j];
        }
    }
    return total;
}

BitMatrix homology_basis(const ChainComplex &c, std::size_t i) {
    if (i > c.length()) {
        throw std::out_of_range("homology_basis: degree out of range");
    }
    auto cycles = kernel_basis(c.boundary(i));
    auto boundaries = c.boundary(i + 1).transpose();
    return quotient_basis(cycles, boundaries);
}

BitMatrix cohomology_basis(const ChainComplex &c, std::size_t i) {
    if (i > c.length()) {
        throw std::out_of_range("cohomology_basis: degree out of range");
    }
    auto cocycles = kernel_basis(c.boundary(i + 1).transpose());
    auto coboundaries = c.boundary(i);
    return quotient_basis(cocycles, coboundaries);
}

CycleBases cycle_bases(const ChainComplex &c) {
    CycleBases out;
    for (std::size_t i = 0; i <= c.length(); i++) {
        out.homology.push_back(homology_basis(c, i));
        out.cohomology.push_back(cohomology_basis(c, i));
    }
    return out;
}

namespace {

BitMatrix tensor_representatives(const TensorProduct &product, std::size_t i, const std::vector<BitMatrix> &b,
                                 const std::vector<BitMatrix> &c) {
    std::vector<std::vector<Index>> rows;
    for (const auto &blk : product.indexing.degrees[i]) {
        const auto &rb = b[blk.j];
        const auto &rc = c[blk.k];
        for (std::size_t x = 0; x < rb.rows(); x++) {
            for (std::size_t y = 0; y < rc.rows(); y++) {
                std::vector<Index> sup;
                for (auto bb : rb.row(x)) {
                    for (auto cc : rc.row(y)) {
                        sup.push_back(static_cast<Index>(blk.offset + bb * blk.dim_c + cc));
                    }
                }
                rows.push_back(std::move(sup));
            }
        }
    }
    auto n_rows = rows.size();
    return BitMatrix(n_rows, product.complex.dim(i), std::move(rows));
}

}  // namespace

CycleBases tensor_cycle_bases(const TensorProduct &product, const CycleBases &b, const CycleBases &c) {
    CycleBases out;
    for (std::size_t i = 0; i <= product.complex.length(); i++) {
        out.homology.push_back(tensor_representatives(product, i, b.homology, c.homology));
        out.cohomology.push_back(tensor_representatives(product, i, b.cohomology, c.cohomology));
    }
    return out;
}

}  // namespace ssdec
