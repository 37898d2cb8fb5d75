#include "ssdec/bp_decoder.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ssdec {

BpConfig parse_bp_variant(const std::string &spec, BpConfig base) {
    if (spec == "tanh") {
        base.variant = BpVariant::Tanh;
    } else if (spec == "jacobian") {
        base.variant = BpVariant::Jacobian;
    } else if (spec.rfind("minsum", 0) == 0) {
        base.variant = BpVariant::MinSum;
        if (spec.size() > 6) {
            if (spec[6] != ':') {
                throw std::invalid_argument("bad BP variant '" + spec + "'");
            }
            std::size_t used = 0;
            double a = 0;
            try {
                a = std::stod(spec.substr(7), &used);
            } catch (const std::exception &) {
                throw std::invalid_argument("bad min-sum scale in '" + spec + "'");
            }
            if (used != spec.size() - 7 || !(a >= 0.0 && a <= 1.0)) {
                throw std::invalid_argument("min-sum scale must lie in [0, 1]: '" + spec + "'");
            }
            base.alpha = a;
        }
    } else {
        throw std::invalid_argument("unknown BP variant '" + spec + "' (tanh, jacobian, minsum[:alpha])");
    }
    return base;
}

std::string bp_variant_name(const BpConfig &cfg) {
    switch (cfg.variant) {
        case BpVariant::Tanh:
            return "tanh";
        case BpVariant::Jacobian:
            return "jacobian";
        case BpVariant::MinSum: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "minsum:%g", cfg.alpha);
            return buf;
        }
    }
    return "?";
}

double llr_xor(double a, double b) {
    double sign = (a < 0) != (b < 0) ? -1.0 : 1.0;
    double m = std::min(std::fabs(a), std::fabs(b));
    return sign * m + std::log1p(std::exp(-std::fabs(a + b))) - std::log1p(std::exp(-std::fabs(a - b)));
}

double prior_llr(double p) {
    return std::log((1.0 - p) / p);
}

namespace {

void jacobian_update(std::span<const double> in, std::span<double> out) {
    const std::size_t d = in.size();
    // Forward partials land in out; the backward partial is carried in a scalar.
    out[0] = kCertainLlr;
    for (std::size_t t = 1; t < d; t++) {
        out[t] = t == 1 ? in[0] : llr_xor(out[t - 1], in[t - 1]);
    }
    double g = 0;
    for (std::size_t t = d; t-- > 0;) {
        if (t == d - 1) {
            g = in[t];
            continue;
        }
        out[t] = t == 0 ? g : llr_xor(out[t], g);
        g = llr_xor(g, in[t]);
    }
}

void tanh_update(std::span<const double> in, std::span<double> out, double clip) {
    const std::size_t d = in.size();
    double prefix = 1.0;
    for (std::size_t t = 0; t < d; t++) {
        out[t] = prefix;
        prefix *= std::tanh(in[t] / 2.0);
    }
    double suffix = 1.0;
    for (std::size_t t = d; t-- > 0;) {
        double v = 2.0 * std::atanh(out[t] * suffix);
        out[t] = std::clamp(v, -clip, clip);
        suffix *= std::tanh(in[t] / 2.0);
    }
}

void minsum_update(std::span<const double> in, std::span<double> out, double alpha) {
    double min1 = kCertainLlr, min2 = kCertainLlr;
    std::size_t arg1 = in.size();
    bool negative = false;
    for (std::size_t t = 0; t < in.size(); t++) {
        double m = std::fabs(in[t]);
        negative ^= in[t] < 0;
        if (m < min1) {
            min2 = min1;
            min1 = m;
            arg1 = t;
        } else if (m < min2) {
            min2 = m;
        }
    }
    for (std::size_t t = 0; t < in.size(); t++) {
        double mag = t == arg1 ? min2 : min1;
        bool neg = negative ^ (in[t] < 0);
        out[t] = (neg ? -alpha : alpha) * mag;
    }
}

}  // namespace

void check_update(const BpConfig &cfg, bool syndrome_bit, std::span<const double> in, std::span<double> out) {
    if (in.empty()) {
        return;
    }
    if (in.size() == 1) {
        out[0] = syndrome_bit ? -kCertainLlr : kCertainLlr;
        return;
    }
    switch (cfg.variant) {
        case BpVariant::Jacobian:
            jacobian_update(in, out);
            break;
        case BpVariant::Tanh:
            tanh_update(in, out, cfg.llr_clip);
            break;
        case BpVariant::MinSum:
            minsum_update(in, out, cfg.alpha);
            break;
    }
    if (syndrome_bit) {
        for (auto &v : out) {
            v = -v;
        }
    }
}

double variable_update(double prior, std::span<const double> in, std::span<double> out) {
    double total = prior;
    for (auto v : in) {
        total += v;
    }
    for (std::size_t t = 0; t < in.size(); t++) {
        out[t] = total - in[t];
    }
    return total;
}

BpDecoder::BpDecoder(const BitMatrix &h, BpConfig cfg) : cfg_(cfg), n_checks_(h.rows()), n_vars_(h.cols()) {
    if (cfg_.max_iters < 1) {
        throw std::invalid_argument("BpConfig: max_iters must be at least 1");
    }
    if (!(cfg_.alpha >= 0.0 && cfg_.alpha <= 1.0)) {
        throw std::invalid_argument("BpConfig: alpha must lie in [0, 1]");
    }
    check_ptr_.assign(n_checks_ + 1, 0);
    for (std::size_t j = 0; j < n_checks_; j++) {
        check_ptr_[j + 1] = check_ptr_[j] + h.row(j).size();
        for (auto v : h.row(j)) {
            edge_var_.push_back(v);
        }
    }
    var_ptr_.assign(n_vars_ + 1, 0);
    for (auto v : edge_var_) {
        var_ptr_[v + 1]++;
    }
    for (std::size_t i = 0; i < n_vars_; i++) {
        var_ptr_[i + 1] += var_ptr_[i];
    }
    var_edges_.resize(edge_var_.size());
    std::vector<std::size_t> fill(var_ptr_.begin(), var_ptr_.end() - 1);
    for (std::size_t e = 0; e < edge_var_.size(); e++) {
        var_edges_[fill[edge_var_[e]]++] = e;
    }
    v2c_.assign(edge_var_.size(), 0.0);
    c2v_.assign(edge_var_.size(), 0.0);
    std::size_t max_deg = std::max(h.max_row_weight(), h.max_col_weight());
    scratch_in_.assign(max_deg, 0.0);
    scratch_out_.assign(max_deg, 0.0);
}

bool BpDecoder::matches_syndrome(const BitVector &hard, const BitVector &syndrome) const {
    for (std::size_t j = 0; j < n_checks_; j++) {
        bool parity = false;
        for (std::size_t e = check_ptr_[j]; e < check_ptr_[j + 1]; e++) {
            parity ^= hard.get(edge_var_[e]);
        }
        if (parity != syndrome.get(j)) {
            return false;
        }
    }
    return true;
}

BpResult BpDecoder::decode(const BitVector &syndrome, std::span<const double> priors) {
    if (syndrome.size() != n_checks_ || priors.size() != n_vars_) {
        throw std::invalid_argument("dimension mismatch in BpDecoder::decode");
    }
    BpResult res;
    res.hard_decisions = BitVector(n_vars_);
    res.posteriors.assign(priors.begin(), priors.end());
    for (std::size_t e = 0; e < edge_var_.size(); e++) {
        v2c_[e] = priors[edge_var_[e]];
    }
    for (std::size_t it = 1; it <= cfg_.max_iters; it++) {
        for (std::size_t j = 0; j < n_checks_; j++) {
            std::size_t b = check_ptr_[j], d = check_ptr_[j + 1] - b;
            check_update(cfg_, syndrome.get(j), std::span<const double>(v2c_.data() + b, d),
                         std::span<double>(c2v_.data() + b, d));
        }
        for (std::size_t i = 0; i < n_vars_; i++) {
            std::size_t b = var_ptr_[i], d = var_ptr_[i + 1] - b;
            for (std::size_t t = 0; t < d; t++) {
                scratch_in_[t] = c2v_[var_edges_[b + t]];
            }
            double q = variable_update(priors[i], std::span<const double>(scratch_in_.data(), d),
                                       std::span<double>(scratch_out_.data(), d));
            for (std::size_t t = 0; t < d; t++) {
                v2c_[var_edges_[b + t]] = scratch_out_[t];
            }
            res.posteriors[i] = q;
            res.hard_decisions.set(i, !(q > 0));
        }
        res.iterations = it;
        if (cfg_.early_stop || it == cfg_.max_iters) {
            if (matches_syndrome(res.hard_decisions, syndrome)) {
                res.converged = true;
                if (cfg_.early_stop) {
                    break;
                }
            }
        }
    }
    return res;
}

BpResult bp_decode(const BitMatrix &h, const BitVector &syndrome, std::span<const double> priors,
                   const BpConfig &cfg) {
    BpDecoder dec(h, cfg);
    return dec.decode(syndrome, priors);
}

}  // namespace ssdec
