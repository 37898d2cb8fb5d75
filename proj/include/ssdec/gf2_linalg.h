#ifndef SSDEC_GF2_LINALG_H
#define SSDEC_GF2_LINALG_H

#include <span>
#include <stdexcept>
#include <vector>

#include "ssdec/bitmatrix.h"

namespace ssdec {

/// Raised when a linear system over GF(2) has no solution.
class InconsistentSystem : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::size_t rank(const BitMatrix &a);

/// Rows form a basis of {v : a v = 0}.
BitMatrix kernel_basis(const BitMatrix &a);

/// Result of eliminating a matrix with a caller-supplied column scan order.
struct PivotRecord {
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// First rank(A) independent columns met while scanning in the given order.
    std::vector<Index> pivot_cols;
    /// transform[r] . s is the coefficient of pivot_cols[r] in the solution.
    std::vector<BitVector> transform;
    /// Left null vectors of A; s is in the column space iff all of them are orthogonal to s.
    std::vector<BitVector> consistency;
};

PivotRecord pivot_with_order(const BitMatrix &a, std::span<const Index> column_order);

/// The unique u supported on rec.pivot_cols with A u = s. Throws InconsistentSystem.
BitVector solve_restricted(const PivotRecord &rec, const BitVector &s);

/// Rows of `numerator` extending a basis of the row space of `denominator` to a basis of
/// the numerator row space. Throws std::invalid_argument if containment fails.
BitMatrix quotient_basis(const BitMatrix &numerator, const BitMatrix &denominator);

/// Whether v lies in the row space of a.
bool in_row_space(const BitMatrix &a, const BitVector &v);

/// Whether s lies in the column space of a.
bool in_column_space(const BitMatrix &a, const BitVector &s);

}  // namespace ssdec

#endif
