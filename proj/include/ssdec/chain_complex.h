#ifndef SSDEC_CHAIN_COMPLEX_H
#define SSDEC_CHAIN_COMPLEX_H

#include <span>
#include <stdexcept>
#include <vector>

#include "ssdec/bitmatrix.h"

namespace ssdec {

/// Chain complex over GF(2): spaces C_0..C_l and boundary maps d_i : C_i -> C_{i-1}, i = 1..l.
class ChainComplex {
   public:
    /// `dims` lists n_0..n_l; `boundaries` lists d_1..d_l. Shapes must chain.
    ChainComplex(std::vector<std::size_t> dims, std::vector<BitMatrix> boundaries);

    /// Length-one complex with d_1 = h.
    static ChainComplex from_check_matrix(const BitMatrix &h);

    std::size_t length() const {
        return dims_.size() - 1;
    }
    std::size_t dim(std::size_t i) const {
        return dims_.at(i);
    }
    const std::vector<std::size_t> &dims() const {
        return dims_;
    }
    /// d_i for 0 <= i <= l+1; d_0 and d_{l+1} are the zero maps into/out of {0}.
    BitMatrix boundary(std::size_t i) const;
    const BitMatrix &stored_boundary(std::size_t i) const {
        return boundaries_.at(i - 1);
    }

    /// The cochain complex re-indexed as a chain complex: degree i holds C_{l-i}, maps are transposes.
    ChainComplex dual() const;

   private:
    std::vector<std::size_t> dims_;
    std::vector<BitMatrix> boundaries_;
};

class ChainComplexError : public std::invalid_argument {
   public:
    ChainComplexError(std::size_t degree, const std::string &what)
        : std::invalid_argument(what), degree_(degree) {
    }
    std::size_t degree() const {
        return degree_;
    }

   private:
    std::size_t degree_;
};

/// Throws ChainComplexError naming the first degree i with d_i d_{i+1} != 0.
void validate(const ChainComplex &c);

/// Summand layout of a product complex. Degree i of B (x) C is the direct sum of the blocks
/// B_j (x) C_k with j + k = i, listed by increasing j; inside a block the element b (x) c
/// has index offset + b * dim(C_k) + c.
struct BasisIndexing {
    struct Block {
        std::size_t j;
        std::size_t k;
        std::size_t offset;
        std::size_t dim_b;
        std::size_t dim_c;
    };
    std::vector<std::vector<Block>> degrees;

    const Block &block(std::size_t i, std::size_t j) const;
    std::size_t index(std::size_t i, std::size_t j, std::size_t b, std::size_t c) const;
};

struct TensorProduct {
    ChainComplex complex;
    BasisIndexing indexing;
};

TensorProduct tensor(const ChainComplex &b, const ChainComplex &c);

std::size_t homology_rank(const ChainComplex &c, std::size_t i);
std::size_t cohomology_rank(const ChainComplex &c, std::size_t i);
std::vector<std::size_t> homology_ranks(const ChainComplex &c);

/// Sum over j + k = i of rb[j] * rc[k].
std::size_t kunneth_rank(std::span<const std::size_t> rb, std::span<const std::size_t> rc, std::size_t i);

/// Representatives of ker d_i / im d_{i+1}.
BitMatrix homology_basis(const ChainComplex &c, std::size_t i);
/// Representatives of ker d_{i+1}^T / im d_i^T.
BitMatrix cohomology_basis(const ChainComplex &c, std::size_t i);

/// Homology and cohomology representatives for every degree of a complex.
struct CycleBases {
    std::vector<BitMatrix> homology;
    std::vector<BitMatrix> cohomology;
};

CycleBases cycle_bases(const ChainComplex &c);

/// Representatives for a product complex built from factor representatives: the classes
/// [b (x) c] span the product (co)homology.
CycleBases tensor_cycle_bases(const TensorProduct &product, const CycleBases &b, const CycleBases &c);

}  // namespace ssdec

#endif
