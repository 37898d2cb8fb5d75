#ifndef SSDEC_MATRIX_IO_H
#define SSDEC_MATRIX_IO_H

#include <iosfwd>
#include <string>

#include "ssdec/bitmatrix.h"

namespace ssdec {

// Sparse text format: a "rows cols" header line, then one "row col" line per 1-entry,
// sorted row-major. Dense format: one line of '0'/'1' characters per row.
// Lines starting with '#' are comments in both.

void write_sparse_text(std::ostream &out, const BitMatrix &m);
void write_dense_text(std::ostream &out, const BitMatrix &m);
BitMatrix read_sparse_text(std::istream &in);
BitMatrix read_dense_text(std::istream &in);

/// Reads either format, choosing by whether the first non-comment line contains whitespace.
BitMatrix read_matrix(std::istream &in);
BitMatrix read_matrix_file(const std::string &path);
void write_matrix_file(const std::string &path, const BitMatrix &m, bool dense = false);

}  // namespace ssdec

#endif
