#ifndef SSDEC_CODES_H
#define SSDEC_CODES_H

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssdec/bitmatrix.h"
#include "ssdec/chain_complex.h"

namespace ssdec {

/// Which Pauli error type is being corrected. Side Z: Z errors, detected by Hx, judged by Lx.
enum class Side { Z, X };

const char *side_name(Side side);
Side parse_side(const std::string &s);

using Distance = std::uint64_t;
inline constexpr Distance kInfiniteDistance = std::numeric_limits<Distance>::max();

/// Saturating product; infinity absorbs.
Distance distance_product(Distance a, Distance b);

/// Index layout of a left-associated product of complexes ((F_1 (x) F_2) (x) F_3) ...
class ProductLayout {
   public:
    explicit ProductLayout(std::vector<std::vector<std::size_t>> factor_dims);

    std::size_t factors() const {
        return factor_dims_.size();
    }
    std::size_t length() const {
        return prefix_dims_.back().size() - 1;
    }
    std::size_t dim(std::size_t i) const {
        return prefix_dims_.back().at(i);
    }
    /// Index of the basis element (c_1 (x) ... (x) c_m), c_f having degree degrees[f].
    std::size_t index(std::span<const std::size_t> degrees, std::span<const std::size_t> coords) const;

   private:
    std::vector<std::vector<std::size_t>> factor_dims_;
    // prefix_dims_[m][i] = dim of degree i in F_1 (x) ... (x) F_{m+1}.
    std::vector<std::vector<std::size_t>> prefix_dims_;
};

struct CssCode {
    std::string name;
    std::string family;
    std::size_t n = 0;
    std::size_t k = 0;
    BitMatrix hx;
    BitMatrix hz;
    std::optional<BitMatrix> mx;
    std::optional<BitMatrix> mz;
    BitMatrix lz;
    BitMatrix lx;
    std::optional<Distance> dz;
    std::optional<Distance> dx;
    /// Degree of the qubit space in the source complex, and that complex's length.
    std::size_t degree = 0;
    std::size_t complex_length = 0;
    std::size_t D = 0;
    std::size_t L = 0;
    std::optional<ProductLayout> layout;

    const BitMatrix &checks(Side side) const {
        return side == Side::Z ? hx : hz;
    }
    const std::optional<BitMatrix> &metachecks(Side side) const {
        return side == Side::Z ? mx : mz;
    }
    /// Logicals that detect a residual of the given error type.
    const BitMatrix &detecting_logicals(Side side) const {
        return side == Side::Z ? lx : lz;
    }
    /// Logical representatives of the given error type.
    const BitMatrix &error_logicals(Side side) const {
        return side == Side::Z ? lz : lx;
    }
};

struct CodeParams {
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<Distance> dz;
    std::optional<Distance> dx;
    std::size_t hx_row_weight = 0;
    std::size_t hx_col_weight = 0;
    std::size_t hz_row_weight = 0;
    std::size_t hz_col_weight = 0;
    std::size_t x_checks = 0;
    std::size_t z_checks = 0;
    std::size_t x_metachecks = 0;
    std::size_t z_metachecks = 0;
};

CodeParams code_params(const CssCode &code);

struct InvariantCheck {
    std::string name;
    bool ok;
};

/// Commutation, metacheck annihilation, logical counts and logical independence.
std::vector<InvariantCheck> check_invariants(const CssCode &code);
bool invariants_hold(const CssCode &code);

BitMatrix repetition_matrix(std::size_t L);

/// Qubits on degree `degree` of `complex`: Hx = d_i, Hz = d_{i+1}^T, Mx = d_{i-1}, Mz = d_{i+2}^T.
/// `bases` provides the homology (Lz) and cohomology (Lx) representatives.
CssCode code_from_complex(const ChainComplex &complex, std::size_t degree, const CycleBases &bases);

CssCode toric_code(std::size_t D, std::size_t i, std::size_t L);
CssCode hgp_2d(const BitMatrix &ha, const BitMatrix &hb);
CssCode hgp_4d(const BitMatrix &h);

/// Iterated left-associated product of length-one complexes, with product representatives
/// and (co)homology distances propagated factor by factor.
struct ProductResult {
    ChainComplex complex;
    CycleBases bases;
    ProductLayout layout;
    std::vector<std::optional<Distance>> homology_distance;
    std::vector<std::optional<Distance>> cohomology_distance;
};

ProductResult product_of_check_matrices(std::span<const BitMatrix> factors);

std::size_t n_a_formula(std::size_t a, std::size_t b, std::size_t r, std::size_t c);

/// min(dA_i * dB_0, dA_{i-1} * dB_1) with infinite factors absorbing.
Distance product_distance(Distance da_i, Distance da_im1, Distance db_0, Distance db_1);

/// Lz = quotient(ker Hx, rows Hz), Lx = quotient(ker Hz, rows Hx).
std::pair<BitMatrix, BitMatrix> logical_operators(const CssCode &code);

inline constexpr std::size_t kBruteForceLimit = 24;

/// Minimum weight of a vector in ker(cycle_checks) outside rowspace(boundaries); infinite if none.
/// Throws std::invalid_argument above kBruteForceLimit columns.
Distance min_nontrivial_weight(const BitMatrix &cycle_checks, const BitMatrix &boundaries);

/// Side Z: weight of the lightest Z logical (ker Hx minus rowspace Hz). Side X symmetric.
Distance brute_force_distance(const CssCode &code, Side side);

/// Parsed code family description: "toric:D=3,i=2", "toric2d", "toric3d", "toric4d",
/// "hgp4d:PATH" or "hgp2d:PATH_A,PATH_B".
struct CodeSpec {
    std::string family;
    std::size_t D = 0;
    std::size_t i = 0;
    std::string path_a;
    std::string path_b;
    /// Canonical name written to campaign CSVs.
    std::string name;
    /// Whether the lattice size L selects the instance.
    bool uses_L = false;
};

/// Throws std::invalid_argument on malformed specs.
CodeSpec parse_code_spec(const std::string &spec);
CssCode build_code(const CodeSpec &spec, std::size_t L);

/// Writes hx.txt, hz.txt, [mx.txt, mz.txt,] lz.txt, lx.txt and meta.json into `dir`.
void export_code(const CssCode &code, const std::string &dir);

std::string distance_string(const std::optional<Distance> &d);

}  // namespace ssdec

#endif
