#include "ssdec/osd.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "dense_gf2.h"

namespace ssdec {

namespace {

std::size_t parse_count(const std::string &text, const std::string &spec) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("bad OSD parameter in '" + spec + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument("bad OSD parameter in '" + spec + "'");
    }
    return v;
}

}  // namespace

OsdConfig parse_osd(const std::string &spec) {
    OsdConfig cfg;
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "none" && arg.empty()) {
        cfg.method = OsdMethod::None;
    } else if ((head == "0" || head == "order0") && arg.empty()) {
        cfg.method = OsdMethod::Order0;
    } else if (head == "exhaustive") {
        cfg.method = OsdMethod::Exhaustive;
        if (!arg.empty()) {
            cfg.order = parse_count(arg, spec);
        }
        if (cfg.order > kMaxOsdOrder) {
            throw std::invalid_argument("OSD order above " + std::to_string(kMaxOsdOrder) + " is not supported");
        }
    } else if (head == "sweep") {
        cfg.method = OsdMethod::CombinationSweep;
        if (!arg.empty()) {
            cfg.lambda = parse_count(arg, spec);
        }
    } else {
        throw std::invalid_argument("unknown OSD strategy '" + spec + "' (none, 0, exhaustive:w, sweep:lambda)");
    }
    return cfg;
}

std::string osd_strategy_name(const OsdConfig &cfg) {
    switch (cfg.method) {
        case OsdMethod::None:
            return "none";
        case OsdMethod::Order0:
            return "order0";
        case OsdMethod::Exhaustive:
            return "exhaustive";
        case OsdMethod::CombinationSweep:
            return "sweep";
    }
    return "?";
}

std::size_t osd_param(const OsdConfig &cfg) {
    switch (cfg.method) {
        case OsdMethod::Exhaustive:
            return cfg.order;
        case OsdMethod::CombinationSweep:
            return cfg.lambda;
        default:
            return 0;
    }
}

std::vector<Index> reliability_order(std::span<const double> reliabilities) {
    std::vector<Index> order(reliabilities.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return reliabilities[a] < reliabilities[b]; });
    return order;
}

InformationSet information_set(const BitMatrix &h, std::span<const double> reliabilities) {
    if (reliabilities.size() != h.cols()) {
        throw std::invalid_argument("dimension mismatch in information_set");
    }
    InformationSet info;
    info.order = reliability_order(reliabilities);
    info.record = pivot_with_order(h, info.order);
    std::vector<char> is_pivot(h.cols(), 0);
    for (auto c : info.record.pivot_cols) {
        is_pivot[c] = 1;
    }
    for (auto c : info.order) {
        if (!is_pivot[c]) {
            info.T.push_back(c);
        }
    }
    return info;
}

BitVector encode_correction(const BitMatrix &h, const BitVector &s, const InformationSet &info, const BitVector &x) {
    if (x.size() != info.T.size() || s.size() != h.rows()) {
        throw std::invalid_argument("dimension mismatch in encode_correction");
    }
    BitVector rhs = s;
    BitVector u(h.cols());
    for (std::size_t t = 0; t < info.T.size(); t++) {
        if (x.get(t)) {
            u.set(info.T[t]);
            for (auto r : h.col(info.T[t])) {
                rhs.flip(r);
            }
        }
    }
    u ^= solve_restricted(info.record, rhs);
    return u;
}

OsdDecoder::OsdDecoder(const BitMatrix &h) : h_(h) {
}

namespace {

// Candidate search over flips of the free bits. Columns hold, per free position, its
// coefficient in every pivot row of the reduced system.
class CandidateSearch {
   public:
    CandidateSearch(std::size_t rank, std::vector<std::vector<std::uint64_t>> columns, std::vector<std::uint64_t> base,
                    std::vector<char> x0)
        : words_((rank + 63) >> 6), columns_(std::move(columns)), base_(std::move(base)), x0_(std::move(x0)) {
        std::size_t x0_weight = std::count(x0_.begin(), x0_.end(), 1);
        best_weight_ = popcount(base_) + x0_weight;
        x0_weight_ = x0_weight;
        scratch_.resize(words_);
    }

    void consider(std::span<const std::size_t> delta) {
        std::copy(base_.begin(), base_.end(), scratch_.begin());
        std::size_t x_weight = x0_weight_;
        for (auto t : delta) {
            const auto &col = columns_[t];
            for (std::size_t w = 0; w < words_; w++) {
                scratch_[w] ^= col[w];
            }
            x_weight = x0_[t] ? x_weight - 1 : x_weight + 1;
        }
        std::size_t weight = popcount(scratch_) + x_weight;
        if (weight < best_weight_) {
            best_weight_ = weight;
            best_delta_.assign(delta.begin(), delta.end());
        }
    }

    const std::vector<std::size_t> &best_delta() const {
        return best_delta_;
    }

   private:
    static std::size_t popcount(const std::vector<std::uint64_t> &v) {
        std::size_t c = 0;
        for (auto w : v) {
            c += std::popcount(w);
        }
        return c;
    }

    std::size_t words_;
    std::vector<std::vector<std::uint64_t>> columns_;
    std::vector<std::uint64_t> base_;
    std::vector<char> x0_;
    std::size_t x0_weight_ = 0;
    std::size_t best_weight_ = 0;
    std::vector<std::size_t> best_delta_;
    std::vector<std::uint64_t> scratch_;
};

// Visits every k-subset of {0..w-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t w, std::size_t k, F &&f) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    if (k > w) {
        return;
    }
    while (true) {
        f(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == w - k + (i - 1)) {
            i--;
        }
        if (i == 0) {
            return;
        }
        idx[i - 1]++;
        for (std::size_t j = i; j < k; j++) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

BitVector OsdDecoder::decode(const BitVector &s, std::span<const double> reliabilities, const BitVector &hard,
                             const OsdConfig &cfg) {
    const auto &h = h_;
    if (s.size() != h.rows() || reliabilities.size() != h.cols() || hard.size() != h.cols()) {
        throw std::invalid_argument("dimension mismatch in OsdDecoder::decode");
    }
    if (cfg.method == OsdMethod::None) {
        return hard;
    }
    auto order = reliability_order(reliabilities);
    std::vector<Index> position(h.cols());
    for (std::size_t k = 0; k < order.size(); k++) {
        position[order[k]] = static_cast<Index>(k);
    }
    // [H P | s] reduced to RREF.
    detail::DenseBitRows m;
    detail::load_permuted(m, h, position, 1);
    const std::size_t rhs = h.cols();
    for (auto r : s.support()) {
        m.set(r, rhs);
    }
    auto elim = detail::eliminate(m, h.cols(), true);
    std::vector<char> pivot_row(h.rows(), 0), pivot_pos(h.cols(), 0);
    for (std::size_t k = 0; k < elim.pivot_rows.size(); k++) {
        pivot_row[elim.pivot_rows[k]] = 1;
        pivot_pos[elim.pivot_cols[k]] = 1;
    }
    for (std::size_t r = 0; r < h.rows(); r++) {
        if (!pivot_row[r] && m.get(r, rhs)) {
            throw InconsistentSystem("OSD: syndrome is not in the column space of the check matrix");
        }
    }
    const std::size_t rank = elim.pivot_rows.size();
    const std::size_t words = (rank + 63) >> 6;
    // Free positions in scan order, i.e. least reliable first.
    std::vector<std::size_t> free_pos;
    for (std::size_t p = 0; p < h.cols(); p++) {
        if (!pivot_pos[p]) {
            free_pos.push_back(p);
        }
    }
    std::vector<std::vector<std::uint64_t>> columns(free_pos.size(), std::vector<std::uint64_t>(words, 0));
    std::vector<std::uint64_t> base(words, 0);
    std::vector<char> x0(free_pos.size(), 0);
    for (std::size_t t = 0; t < free_pos.size(); t++) {
        x0[t] = hard.get(order[free_pos[t]]);
    }
    for (std::size_t k = 0; k < rank; k++) {
        const auto *row = m.row(elim.pivot_rows[k]);
        auto bit = std::uint64_t{1} << (k & 63);
        if ((row[rhs >> 6] >> (rhs & 63)) & 1) {
            base[k >> 6] ^= bit;
        }
        for (std::size_t t = 0; t < free_pos.size(); t++) {
            auto p = free_pos[t];
            if ((row[p >> 6] >> (p & 63)) & 1) {
                columns[t][k >> 6] |= bit;
                if (x0[t]) {
                    base[k >> 6] ^= bit;
                }
            }
        }
    }

    CandidateSearch search(rank, columns, base, x0);
    const std::size_t nt = free_pos.size();
    if (cfg.method == OsdMethod::Exhaustive) {
        std::size_t w = std::min(cfg.order, nt);
        for (std::size_t k = 1; k <= w; k++) {
            for_each_subset(w, k, [&](std::span<const std::size_t> d) { search.consider(d); });
        }
    } else if (cfg.method == OsdMethod::CombinationSweep) {
        for (std::size_t t = 0; t < nt; t++) {
            std::size_t d[1] = {t};
            search.consider(d);
        }
        std::size_t lam = std::min(cfg.lambda, nt);
        for_each_subset(lam, 2, [&](std::span<const std::size_t> d) { search.consider(d); });
    }

    std::vector<char> x = x0;
    for (auto t : search.best_delta()) {
        x[t] ^= 1;
    }
    BitVector u(h.cols());
    for (std::size_t t = 0; t < nt; t++) {
        if (x[t]) {
            u.set(order[free_pos[t]]);
        }
    }
    for (std::size_t k = 0; k < rank; k++) {
        bool v = (base[k >> 6] >> (k & 63)) & 1;
        for (auto t : search.best_delta()) {
            v ^= (columns[t][k >> 6] >> (k & 63)) & 1;
        }
        if (v) {
            u.set(order[elim.pivot_cols[k]]);
        }
    }
    return u;
}

BitVector osd_decode(const BitMatrix &h, const BitVector &s, std::span<const double> reliabilities,
                     const BitVector &hard, const OsdConfig &cfg) {
    OsdDecoder dec(h);
    return dec.decode(s, reliabilities, hard, cfg);
}

}  // namespace ssdec
