#ifndef SSDEC_TEST_ORACLES_H
#define SSDEC_TEST_ORACLES_H

// Reference implementations written independently of the library: plain byte matrices,
// textbook elimination, exhaustive enumeration.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ssdec/bitmatrix.h"

namespace oracle {

using Dense = std::vector<std::vector<int>>;

inline Dense to_dense(const ssdec::BitMatrix &m) {
    Dense d(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); r++) {
        for (auto c : m.row(r)) {
            d[r][c] = 1;
        }
    }
    return d;
}

inline ssdec::BitMatrix from_dense(const Dense &d, std::size_t cols) {
    std::vector<std::vector<ssdec::Index>> rows(d.size());
    for (std::size_t r = 0; r < d.size(); r++) {
        for (std::size_t c = 0; c < cols; c++) {
            if (d[r][c]) {
                rows[r].push_back(static_cast<ssdec::Index>(c));
            }
        }
    }
    return ssdec::BitMatrix(d.size(), cols, std::move(rows));
}

inline std::vector<int> to_bits(const ssdec::BitVector &v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); i++) {
        out[i] = v.get(i);
    }
    return out;
}

inline Dense multiply(const Dense &a, const Dense &b, std::size_t inner, std::size_t cols) {
    Dense out(a.size(), std::vector<int>(cols, 0));
    for (std::size_t i = 0; i < a.size(); i++) {
        for (std::size_t k = 0; k < cols; k++) {
            int acc = 0;
            for (std::size_t j = 0; j < inner; j++) {
                acc ^= a[i][j] & b[j][k];
            }
            out[i][k] = acc;
        }
    }
    return out;
}

inline std::vector<int> apply(const Dense &a, const std::vector<int> &v) {
    std::vector<int> out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); i++) {
        for (std::size_t j = 0; j < v.size(); j++) {
            out[i] ^= a[i][j] & v[j];
        }
    }
    return out;
}

/// Row-reduction rank with row swaps.
inline std::size_t rank(Dense m) {
    if (m.empty()) {
        return 0;
    }
    std::size_t cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); c++) {
        std::size_t p = r;
        while (p < m.size() && !m[p][c]) {
            p++;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < m.size(); i++) {
            if (i != r && m[i][c]) {
                for (std::size_t k = 0; k < cols; k++) {
                    m[i][k] ^= m[r][k];
                }
            }
        }
        r++;
    }
    return r;
}

inline std::size_t rank(const ssdec::BitMatrix &m) {
    return rank(to_dense(m));
}

inline Dense append_row(Dense m, const std::vector<int> &row) {
    m.push_back(row);
    return m;
}

/// Whether v is in the row space of m (m given with `cols` columns).
inline bool in_row_space(const Dense &m, const std::vector<int> &v) {
    return rank(append_row(m, v)) == rank(m);
}

inline Dense transpose(const Dense &m, std::size_t cols) {
    Dense t(cols, std::vector<int>(m.size(), 0));
    for (std::size_t i = 0; i < m.size(); i++) {
        for (std::size_t j = 0; j < cols; j++) {
            t[j][i] = m[i][j];
        }
    }
    return t;
}

inline std::vector<int> bits_of(std::uint64_t mask, std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; i++) {
        v[i] = (mask >> i) & 1;
    }
    return v;
}

inline bool is_zero(const std::vector<int> &v) {
    for (auto x : v) {
        if (x) {
            return false;
        }
    }
    return true;
}

inline int weight(const std::vector<int> &v) {
    int w = 0;
    for (auto x : v) {
        w += x;
    }
    return w;
}

/// Minimum weight over all x with a x = s, by enumerating 2^n vectors; -1 if none.
inline int min_weight_solution(const ssdec::BitMatrix &a, const ssdec::BitVector &s) {
    auto d = to_dense(a);
    auto target = to_bits(s);
    int best = -1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.cols()); mask++) {
        auto x = bits_of(mask, a.cols());
        if (oracle::apply(d, x) == target) {
            int w = weight(x);
            if (best < 0 || w < best) {
                best = w;
            }
        }
    }
    return best;
}

/// Minimum weight of a vector in ker(checks) outside rowspace(stabilisers); max int if none.
inline int min_logical_weight(const ssdec::BitMatrix &checks, const ssdec::BitMatrix &stabilisers) {
    auto c = to_dense(checks);
    auto st = to_dense(stabilisers);
    std::size_t n = checks.cols();
    int best = std::numeric_limits<int>::max();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask++) {
        auto x = bits_of(mask, n);
        int w = weight(x);
        if (w >= best || !is_zero(oracle::apply(c, x))) {
            continue;
        }
        if (!in_row_space(st, x)) {
            best = w;
        }
    }
    return best;
}

/// LLR of a XOR b evaluated in the probability domain.
inline double xor_llr_probability(double a, double b) {
    double pa = 1.0 / (1.0 + std::exp(a)), qa = 1.0 / (1.0 + std::exp(-a));
    double pb = 1.0 / (1.0 + std::exp(b)), qb = 1.0 / (1.0 + std::exp(-b));
    double p = pa * qb + pb * qa;
    double q = pa * pb + qa * qb;
    return std::log(q / p);
}

/// Exact posterior LLRs ln(P(x_i=0|s)/P(x_i=1|s)) by enumerating all solutions of h x = s.
inline std::vector<double> exact_marginals(const ssdec::BitMatrix &h, const ssdec::BitVector &s,
                                           const std::vector<double> &p) {
    auto d = to_dense(h);
    auto target = to_bits(s);
    std::size_t n = h.cols();
    std::vector<double> zero(n, 0.0), one(n, 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); mask++) {
        auto x = bits_of(mask, n);
        if (oracle::apply(d, x) != target) {
            continue;
        }
        double w = 1.0;
        for (std::size_t i = 0; i < n; i++) {
            w *= x[i] ? p[i] : 1 - p[i];
        }
        for (std::size_t i = 0; i < n; i++) {
            (x[i] ? one : zero)[i] += w;
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; i++) {
        out[i] = std::log(zero[i] / one[i]);
    }
    return out;
}

inline ssdec::BitMatrix random_matrix(std::size_t rows, std::size_t cols, double density, std::mt19937_64 &rng) {
    std::bernoulli_distribution bit(density);
    std::vector<std::vector<ssdec::Index>> sup(rows);
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            if (bit(rng)) {
                sup[r].push_back(static_cast<ssdec::Index>(c));
            }
        }
    }
    return ssdec::BitMatrix(rows, cols, std::move(sup));
}

inline ssdec::BitVector random_vector(std::size_t n, double density, std::mt19937_64 &rng) {
    std::bernoulli_distribution bit(density);
    ssdec::BitVector v(n);
    for (std::size_t i = 0; i < n; i++) {
        if (bit(rng)) {
            v.set(i);
        }
    }
    return v;
}

inline double binomial(std::size_t n, std::size_t k) {
    double r = 1;
    for (std::size_t i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

}  // namespace oracle

#endif
