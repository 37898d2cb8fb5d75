#include "ssdec/gf2_linalg.h"

#include <numeric>

#include "dense_gf2.h"

namespace ssdec {

using detail::DenseBitRows;
using detail::EchelonBasis;

namespace {

DenseBitRows load(const BitMatrix &a, std::size_t extra_cols = 0) {
    DenseBitRows m(a.rows(), a.cols() + extra_cols);
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (auto c : a.row(r)) {
            m.set(r, c);
        }
    }
    return m;
}

BitVector extract(const DenseBitRows &m, std::size_t r, std::size_t begin, std::size_t end) {
    BitVector out(end - begin);
    for (std::size_t c = begin; c < end; c++) {
        if (m.get(r, c)) {
            out.set(c - begin);
        }
    }
    return out;
}

}  // namespace

std::size_t rank(const BitMatrix &a) {
    // Eliminating the thinner orientation is cheaper.
    if (a.rows() > a.cols()) {
        auto m = load(a.transpose());
        return detail::eliminate(m, m.cols(), false).pivot_cols.size();
    }
    auto m = load(a);
    return detail::eliminate(m, m.cols(), false).pivot_cols.size();
}

BitMatrix kernel_basis(const BitMatrix &a) {
    auto m = load(a);
    auto res = detail::eliminate(m, a.cols(), true);
    std::vector<char> is_pivot(a.cols(), 0);
    for (auto c : res.pivot_cols) {
        is_pivot[c] = 1;
    }
    std::vector<std::vector<Index>> rows;
    for (std::size_t f = 0; f < a.cols(); f++) {
        if (is_pivot[f]) {
            continue;
        }
        std::vector<Index> sup{static_cast<Index>(f)};
        for (std::size_t k = 0; k < res.pivot_rows.size(); k++) {
            if (m.get(res.pivot_rows[k], f)) {
                sup.push_back(res.pivot_cols[k]);
            }
        }
        rows.push_back(std::move(sup));
    }
    auto n_rows = rows.size();
    return BitMatrix(n_rows, a.cols(), std::move(rows));
}

PivotRecord pivot_with_order(const BitMatrix &a, std::span<const Index> column_order) {
    if (column_order.size() != a.cols()) {
        throw std::invalid_argument("pivot_with_order: column order is not a permutation");
    }
    std::vector<Index> position(a.cols(), 0);
    std::vector<char> seen(a.cols(), 0);
    for (std::size_t k = 0; k < column_order.size(); k++) {
        auto c = column_order[k];
        if (c >= a.cols() || seen[c]) {
            throw std::invalid_argument("pivot_with_order: column order is not a permutation");
        }
        seen[c] = 1;
        position[c] = static_cast<Index>(k);
    }

    // [A P | I]: the identity block accumulates the row operations.
    DenseBitRows m;
    detail::load_permuted(m, a, position, a.rows());
    for (std::size_t r = 0; r < a.rows(); r++) {
        m.set(r, a.cols() + r);
    }
    auto res = detail::eliminate(m, a.cols(), true);

    PivotRecord rec;
    rec.rows = a.rows();
    rec.cols = a.cols();
    std::vector<char> is_pivot_row(a.rows(), 0);
    for (std::size_t k = 0; k < res.pivot_rows.size(); k++) {
        rec.pivot_cols.push_back(column_order[res.pivot_cols[k]]);
        rec.transform.push_back(extract(m, res.pivot_rows[k], a.cols(), a.cols() + a.rows()));
        is_pivot_row[res.pivot_rows[k]] = 1;
    }
    for (std::size_t r = 0; r < a.rows(); r++) {
        if (!is_pivot_row[r]) {
            rec.consistency.push_back(extract(m, r, a.cols(), a.cols() + a.rows()));
        }
    }
    return rec;
}

BitVector solve_restricted(const PivotRecord &rec, const BitVector &s) {
    if (s.size() != rec.rows) {
        throw std::invalid_argument("dimension mismatch in solve_restricted");
    }
    for (const auto &c : rec.consistency) {
        if (c.dot(s)) {
            throw InconsistentSystem("solve_restricted: right-hand side is not in the column space");
        }
    }
    BitVector u(rec.cols);
    for (std::size_t k = 0; k < rec.pivot_cols.size(); k++) {
        if (rec.transform[k].dot(s)) {
            u.set(rec.pivot_cols[k]);
        }
    }
    return u;
}

BitMatrix quotient_basis(const BitMatrix &numerator, const BitMatrix &denominator) {
    if (numerator.cols() != denominator.cols()) {
        throw std::invalid_argument("dimension mismatch in quotient_basis");
    }
    EchelonBasis num_space(numerator.cols());
    for (std::size_t r = 0; r < numerator.rows(); r++) {
        num_space.insert(num_space.pack(numerator.row(r)));
    }
    EchelonBasis basis(numerator.cols());
    for (std::size_t r = 0; r < denominator.rows(); r++) {
        auto v = basis.pack(denominator.row(r));
        if (num_space.reduce(v)) {
            throw std::invalid_argument("quotient_basis: denominator row space is not contained in the numerator's");
        }
        basis.insert(basis.pack(denominator.row(r)));
    }
    std::vector<std::vector<Index>> reps;
    for (std::size_t r = 0; r < numerator.rows(); r++) {
        if (basis.insert(basis.pack(numerator.row(r)))) {
            auto sup = numerator.row(r);
            reps.emplace_back(sup.begin(), sup.end());
        }
    }
    auto n_rows = reps.size();
    return BitMatrix(n_rows, numerator.cols(), std::move(reps));
}

bool in_row_space(const BitMatrix &a, const BitVector &v) {
    if (v.size() != a.cols()) {
        throw std::invalid_argument("dimension mismatch in in_row_space");
    }
    EchelonBasis basis(a.cols());
    for (std::size_t r = 0; r < a.rows(); r++) {
        basis.insert(basis.pack(a.row(r)));
    }
    auto sup = v.support();
    auto packed = basis.pack(sup);
    return !basis.reduce(packed);
}

bool in_column_space(const BitMatrix &a, const BitVector &s) {
    if (s.size() != a.rows()) {
        throw std::invalid_argument("dimension mismatch in in_column_space");
    }
    auto m = load(a, 1);
    for (auto i : s.support()) {
        m.set(i, a.cols());
    }
    auto res = detail::eliminate(m, a.cols(), false);
    std::vector<char> used(a.rows(), 0);
    for (auto r : res.pivot_rows) {
        used[r] = 1;
    }
    for (std::size_t r = 0; r < a.rows(); r++) {
        if (!used[r] && m.get(r, a.cols())) {
            return false;
        }
    }
    return true;
}

}  // namespace ssdec
