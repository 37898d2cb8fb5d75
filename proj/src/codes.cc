#include "ssdec/codes.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "ssdec/gf2_linalg.h"
#include "ssdec/matrix_io.h"

namespace ssdec {

const char *side_name(Side side) {
    return side == Side::Z ? "Z" : "X";
}

Side parse_side(const std::string &s) {
    if (s == "Z" || s == "z") {
        return Side::Z;
    }
    if (s == "X" || s == "x") {
        return Side::X;
    }
    throw std::invalid_argument("side must be Z or X, got '" + s + "'");
}

Distance distance_product(Distance a, Distance b) {
    if (a == kInfiniteDistance || b == kInfiniteDistance) {
        return kInfiniteDistance;
    }
    if (a != 0 && b > kInfiniteDistance / a) {
        return kInfiniteDistance;
    }
    return a * b;
}

std::string distance_string(const std::optional<Distance> &d) {
    if (!d) {
        return "unknown";
    }
    if (*d == kInfiniteDistance) {
        return "inf";
    }
    return std::to_string(*d);
}

ProductLayout::ProductLayout(std::vector<std::vector<std::size_t>> factor_dims) : factor_dims_(std::move(factor_dims)) {
    if (factor_dims_.empty()) {
        throw std::invalid_argument("ProductLayout needs at least one factor");
    }
    prefix_dims_.push_back(factor_dims_[0]);
    for (std::size_t m = 1; m < factor_dims_.size(); m++) {
        const auto &a = prefix_dims_.back();
        const auto &f = factor_dims_[m];
        std::vector<std::size_t> out(a.size() + f.size() - 1, 0);
        for (std::size_t j = 0; j < a.size(); j++) {
            for (std::size_t k = 0; k < f.size(); k++) {
                out[j + k] += a[j] * f[k];
            }
        }
        prefix_dims_.push_back(std::move(out));
    }
}

std::size_t ProductLayout::index(std::span<const std::size_t> degrees, std::span<const std::size_t> coords) const {
    if (degrees.size() != factor_dims_.size() || coords.size() != factor_dims_.size()) {
        throw std::invalid_argument("ProductLayout::index: wrong number of factors");
    }
    std::size_t idx = coords[0];
    std::size_t deg = degrees[0];
    for (std::size_t m = 1; m < factor_dims_.size(); m++) {
        const auto &prev = prefix_dims_[m - 1];
        const auto &f = factor_dims_[m];
        std::size_t i = deg + degrees[m];
        std::size_t lf = f.size() - 1;
        std::size_t offset = 0;
        for (std::size_t j = i > lf ? i - lf : 0; j < deg; j++) {
            offset += prev[j] * f[i - j];
        }
        idx = offset + idx * f[degrees[m]] + coords[m];
        deg = i;
    }
    return idx;
}

CodeParams code_params(const CssCode &code) {
    CodeParams p;
    p.n = code.n;
    p.k = code.k;
    p.dz = code.dz;
    p.dx = code.dx;
    p.hx_row_weight = code.hx.max_row_weight();
    p.hx_col_weight = code.hx.max_col_weight();
    p.hz_row_weight = code.hz.max_row_weight();
    p.hz_col_weight = code.hz.max_col_weight();
    p.x_checks = code.hx.rows();
    p.z_checks = code.hz.rows();
    p.x_metachecks = code.mx ? code.mx->rows() : 0;
    p.z_metachecks = code.mz ? code.mz->rows() : 0;
    return p;
}

std::vector<InvariantCheck> check_invariants(const CssCode &code) {
    std::vector<InvariantCheck> out;
    out.push_back({"Hx Hz^T = 0", matmul(code.hx, code.hz.transpose()).is_zero()});
    if (code.mx) {
        out.push_back({"Mx Hx = 0", code.mx->cols() == code.hx.rows() && matmul(*code.mx, code.hx).is_zero()});
    }
    if (code.mz) {
        out.push_back({"Mz Hz = 0", code.mz->cols() == code.hz.rows() && matmul(*code.mz, code.hz).is_zero()});
    }
    out.push_back({"qubit count", code.hx.cols() == code.n && code.hz.cols() == code.n});
    out.push_back({"logical count", code.lz.rows() == code.k && code.lx.rows() == code.k});
    out.push_back({"Hx Lz^T = 0", matmul(code.hx, code.lz.transpose()).is_zero()});
    out.push_back({"Hz Lx^T = 0", matmul(code.hz, code.lx.transpose()).is_zero()});
    // Full-rank pairing with Lx forces Lz to be independent modulo rowspace(Hz), and vice versa.
    out.push_back({"logical pairing rank = k", rank(matmul(code.lz, code.lx.transpose())) == code.k});
    return out;
}

bool invariants_hold(const CssCode &code) {
    auto checks = check_invariants(code);
    return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck &c) { return c.ok; });
}

BitMatrix repetition_matrix(std::size_t L) {
    if (L < 2) {
        throw std::invalid_argument("repetition_matrix: L must be at least 2");
    }
    std::vector<std::vector<Index>> rows(L);
    for (std::size_t r = 0; r < L; r++) {
        rows[r] = {static_cast<Index>(r), static_cast<Index>((r + 1) % L)};
    }
    return BitMatrix(L, L, std::move(rows));
}

CssCode code_from_complex(const ChainComplex &complex, std::size_t degree, const CycleBases &bases) {
    auto l = complex.length();
    if (degree < 1 || degree + 1 > l) {
        throw std::invalid_argument("code_from_complex: qubit degree must satisfy 1 <= i <= l-1");
    }
    CssCode code;
    code.n = complex.dim(degree);
    code.hx = complex.stored_boundary(degree);
    code.hz = complex.stored_boundary(degree + 1).transpose();
    if (degree >= 2) {
        code.mx = complex.stored_boundary(degree - 1);
    }
    if (degree + 2 <= l) {
        code.mz = complex.stored_boundary(degree + 2).transpose();
    }
    code.lz = bases.homology.at(degree);
    code.lx = bases.cohomology.at(degree);
    code.k = code.lz.rows();
    code.degree = degree;
    code.complex_length = l;
    return code;
}

namespace {

std::optional<Distance> factor_distance(const BitMatrix &cycle_checks, const BitMatrix &boundaries) {
    if (cycle_checks.cols() > kBruteForceLimit) {
        return std::nullopt;
    }
    return min_nontrivial_weight(cycle_checks, boundaries);
}

std::optional<Distance> min_product(const std::vector<std::optional<Distance>> &a,
                                    const std::vector<std::optional<Distance>> &b, std::size_t i) {
    std::optional<Distance> best = kInfiniteDistance;
    for (std::size_t k = 0; k < b.size(); k++) {
        if (k > i || i - k >= a.size()) {
            continue;
        }
        const auto &x = a[i - k];
        const auto &y = b[k];
        if (!x || !y) {
            return std::nullopt;
        }
        best = std::min(*best, distance_product(*x, *y));
    }
    return best;
}

}  // namespace

ProductResult product_of_check_matrices(std::span<const BitMatrix> factors) {
    if (factors.empty()) {
        throw std::invalid_argument("product_of_check_matrices: no factors");
    }
    std::vector<std::vector<std::size_t>> dims;
    std::optional<ChainComplex> acc;
    CycleBases acc_bases;
    std::vector<std::optional<Distance>> hd, cd;
    for (const auto &h : factors) {
        auto f = ChainComplex::from_check_matrix(h);
        auto fb = cycle_bases(f);
        auto ht = h.transpose();
        std::vector<std::optional<Distance>> fhd{factor_distance(BitMatrix(0, h.rows()), ht),
                                                 factor_distance(h, BitMatrix(0, h.cols()))};
        std::vector<std::optional<Distance>> fcd{factor_distance(ht, BitMatrix(0, h.rows())),
                                                 factor_distance(BitMatrix(0, h.cols()), h)};
        dims.push_back(f.dims());
        if (!acc) {
            acc = f;
            acc_bases = std::move(fb);
            hd = std::move(fhd);
            cd = std::move(fcd);
            continue;
        }
        auto prod = tensor(*acc, f);
        acc_bases = tensor_cycle_bases(prod, acc_bases, fb);
        std::vector<std::optional<Distance>> nhd, ncd;
        for (std::size_t i = 0; i <= prod.complex.length(); i++) {
            nhd.push_back(min_product(hd, fhd, i));
            ncd.push_back(min_product(cd, fcd, i));
        }
        hd = std::move(nhd);
        cd = std::move(ncd);
        acc = std::move(prod.complex);
    }
    return ProductResult{std::move(*acc), std::move(acc_bases), ProductLayout(std::move(dims)), std::move(hd),
                         std::move(cd)};
}

CssCode toric_code(std::size_t D, std::size_t i, std::size_t L) {
    if (D < 2 || i < 1 || i >= D) {
        throw std::invalid_argument("toric_code: need 1 <= i <= D-1 (got D=" + std::to_string(D) +
                                    ", i=" + std::to_string(i) + ")");
    }
    if (L < 2) {
        throw std::invalid_argument("toric_code: L must be at least 2");
    }
    std::vector<BitMatrix> factors(D, repetition_matrix(L));
    auto prod = product_of_check_matrices(factors);
    auto code = code_from_complex(prod.complex, i, prod.bases);
    Distance dz = 1, dx = 1;
    for (std::size_t t = 0; t < i; t++) {
        dz = distance_product(dz, L);
    }
    for (std::size_t t = 0; t < D - i; t++) {
        dx = distance_product(dx, L);
    }
    code.dz = dz;
    code.dx = dx;
    code.D = D;
    code.L = L;
    code.family = "toric";
    code.name = "toric_D" + std::to_string(D) + "_i" + std::to_string(i) + "_L" + std::to_string(L);
    code.layout = std::move(prod.layout);
    return code;
}

CssCode hgp_2d(const BitMatrix &ha, const BitMatrix &hb) {
    std::vector<BitMatrix> factors{ha, hb.transpose()};
    auto prod = product_of_check_matrices(factors);
    auto code = code_from_complex(prod.complex, 1, prod.bases);
    code.dz = prod.homology_distance[1];
    code.dx = prod.cohomology_distance[1];
    code.D = 2;
    code.family = "hgp2d";
    code.name = "hgp2d_n" + std::to_string(code.n);
    code.layout = std::move(prod.layout);
    return code;
}

CssCode hgp_4d(const BitMatrix &h) {
    auto ht = h.transpose();
    std::vector<BitMatrix> factors{h, h, ht, ht};
    auto prod = product_of_check_matrices(factors);
    auto code = code_from_complex(prod.complex, 2, prod.bases);
    code.dz = prod.homology_distance[2];
    code.dx = prod.cohomology_distance[2];
    code.D = 4;
    code.family = "hgp4d";
    code.name = "hgp4d_n" + std::to_string(code.n);
    code.layout = std::move(prod.layout);
    return code;
}

std::size_t n_a_formula(std::size_t a, std::size_t b, std::size_t r, std::size_t c) {
    auto binom = [](std::size_t n, std::size_t k) -> std::size_t {
        if (k > n) {
            return 0;
        }
        std::size_t out = 1;
        for (std::size_t t = 1; t <= k; t++) {
            out = out * (n - k + t) / t;
        }
        return out;
    };
    auto ipow = [](std::size_t base, std::size_t e) {
        std::size_t out = 1;
        while (e--) {
            out *= base;
        }
        return out;
    };
    std::size_t total = 0;
    for (std::size_t i = 0; i <= a; i++) {
        if (b + 2 * i < a) {
            continue;
        }
        total += ipow(c, b - a + 2 * i) * ipow(r, 2 * a - 2 * i) * binom(a, i) * binom(b, a - i);
    }
    return total;
}

Distance product_distance(Distance da_i, Distance da_im1, Distance db_0, Distance db_1) {
    return std::min(distance_product(da_i, db_0), distance_product(da_im1, db_1));
}

std::pair<BitMatrix, BitMatrix> logical_operators(const CssCode &code) {
    auto lz = quotient_basis(kernel_basis(code.hx), code.hz);
    auto lx = quotient_basis(kernel_basis(code.hz), code.hx);
    return {std::move(lz), std::move(lx)};
}

Distance min_nontrivial_weight(const BitMatrix &cycle_checks, const BitMatrix &boundaries) {
    const std::size_t n = cycle_checks.cols();
    if (n > kBruteForceLimit) {
        throw std::invalid_argument("min_nontrivial_weight: more than " + std::to_string(kBruteForceLimit) +
                                    " columns");
    }
    if (boundaries.cols() != n) {
        throw std::invalid_argument("dimension mismatch in min_nontrivial_weight");
    }
    auto to_mask = [](std::span<const Index> sup) {
        std::uint32_t m = 0;
        for (auto i : sup) {
            m |= std::uint32_t{1} << i;
        }
        return m;
    };
    std::vector<std::uint32_t> checks;
    for (std::size_t r = 0; r < cycle_checks.rows(); r++) {
        checks.push_back(to_mask(cycle_checks.row(r)));
    }
    // XOR basis keyed by highest set bit.
    std::uint32_t basis[32] = {};
    auto reduce = [&](std::uint32_t v) {
        while (v) {
            int hb = 31 - std::countl_zero(v);
            if (!basis[hb]) {
                return v;
            }
            v ^= basis[hb];
        }
        return v;
    };
    for (std::size_t r = 0; r < boundaries.rows(); r++) {
        auto v = reduce(to_mask(boundaries.row(r)));
        if (v) {
            basis[31 - std::countl_zero(v)] = v;
        }
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::size_t w = 1; w <= n; w++) {
        // Gosper's hack over all n-bit masks of weight w.
        std::uint64_t v = (std::uint64_t{1} << w) - 1;
        while (v < limit) {
            auto m = static_cast<std::uint32_t>(v);
            bool in_kernel = true;
            for (auto c : checks) {
                if (std::popcount(c & m) & 1) {
                    in_kernel = false;
                    break;
                }
            }
            if (in_kernel && reduce(m) != 0) {
                return w;
            }
            std::uint64_t t = v | (v - 1);
            v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
        }
    }
    return kInfiniteDistance;
}

Distance brute_force_distance(const CssCode &code, Side side) {
    if (side == Side::Z) {
        return min_nontrivial_weight(code.hx, code.hz);
    }
    return min_nontrivial_weight(code.hz, code.hx);
}

CodeSpec parse_code_spec(const std::string &text) {
    CodeSpec spec;
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto bad = [&](const std::string &why) {
        return std::invalid_argument("bad code spec '" + text + "': " + why);
    };
    if (head == "toric2d" || head == "toric3d" || head == "toric4d") {
        if (!rest.empty()) {
            throw bad("shorthand takes no parameters");
        }
        spec.D = static_cast<std::size_t>(head[5] - '0');
        spec.i = spec.D == 2 ? 1 : 2;
    } else if (head == "toric") {
        std::size_t pos = 0;
        while (pos <= rest.size() && !rest.empty()) {
            auto comma = rest.find(',', pos);
            auto item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw bad("expected key=value, got '" + item + "'");
            }
            auto key = item.substr(0, eq);
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(item.substr(eq + 1), &used);
            } catch (const std::exception &) {
                throw bad("value of '" + key + "' is not a count");
            }
            if (used != item.size() - eq - 1) {
                throw bad("value of '" + key + "' is not a count");
            }
            if (key == "D") {
                spec.D = v;
            } else if (key == "i") {
                spec.i = v;
            } else {
                throw bad("unknown key '" + key + "'");
            }
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (spec.D == 0 || spec.i == 0) {
            throw bad("toric needs D and i");
        }
    } else if (head == "hgp4d") {
        if (rest.empty()) {
            throw bad("hgp4d needs a matrix file");
        }
        spec.family = "hgp4d";
        spec.path_a = rest;
        spec.name = "hgp4d_" + std::filesystem::path(rest).stem().string();
        return spec;
    } else if (head == "hgp2d") {
        auto comma = rest.find(',');
        if (rest.empty() || comma == std::string::npos) {
            throw bad("hgp2d needs two matrix files separated by a comma");
        }
        spec.family = "hgp2d";
        spec.path_a = rest.substr(0, comma);
        spec.path_b = rest.substr(comma + 1);
        spec.name = "hgp2d_" + std::filesystem::path(spec.path_a).stem().string() + "_" +
                    std::filesystem::path(spec.path_b).stem().string();
        return spec;
    } else {
        throw bad("unknown family (toric, toric2d, toric3d, toric4d, hgp4d, hgp2d)");
    }
    if (spec.D < 2 || spec.i < 1 || spec.i >= spec.D) {
        throw bad("need 1 <= i <= D-1");
    }
    spec.family = "toric";
    spec.uses_L = true;
    spec.name = "toric_D" + std::to_string(spec.D) + "_i" + std::to_string(spec.i);
    return spec;
}

CssCode build_code(const CodeSpec &spec, std::size_t L) {
    if (spec.family == "toric") {
        return toric_code(spec.D, spec.i, L);
    }
    if (spec.family == "hgp4d") {
        auto code = hgp_4d(read_matrix_file(spec.path_a));
        code.name = spec.name;
        return code;
    }
    if (spec.family == "hgp2d") {
        auto code = hgp_2d(read_matrix_file(spec.path_a), read_matrix_file(spec.path_b));
        code.name = spec.name;
        return code;
    }
    throw std::invalid_argument("build_code: unknown family '" + spec.family + "'");
}

void export_code(const CssCode &code, const std::string &dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto path = [&](const char *name) { return (fs::path(dir) / name).string(); };
    write_matrix_file(path("hx.txt"), code.hx);
    write_matrix_file(path("hz.txt"), code.hz);
    if (code.mx) {
        write_matrix_file(path("mx.txt"), *code.mx);
    }
    if (code.mz) {
        write_matrix_file(path("mz.txt"), *code.mz);
    }
    write_matrix_file(path("lz.txt"), code.lz);
    write_matrix_file(path("lx.txt"), code.lx);

    nlohmann::json meta;
    meta["name"] = code.name;
    meta["family"] = code.family;
    meta["n"] = code.n;
    meta["k"] = code.k;
    meta["dz"] = distance_string(code.dz);
    meta["dx"] = distance_string(code.dx);
    meta["qubit_degree"] = code.degree;
    meta["complex_length"] = code.complex_length;
    meta["D"] = code.D;
    meta["L"] = code.L;
    meta["has_mx"] = code.mx.has_value();
    meta["has_mz"] = code.mz.has_value();
    std::ofstream out(path("meta.json"));
    if (!out) {
        throw std::runtime_error("cannot write " + path("meta.json"));
    }
    out << meta.dump(2) << '\n';
}

}  // namespace ssdec
