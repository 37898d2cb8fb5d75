#ifndef SSDEC_BP_DECODER_H
#define SSDEC_BP_DECODER_H

#include <span>
#include <string>
#include <vector>

#include "ssdec/bitmatrix.h"

namespace ssdec {

enum class BpVariant { Tanh, Jacobian, MinSum };

struct BpConfig {
    BpVariant variant = BpVariant::Jacobian;
    /// Min-sum scale factor.
    double alpha = 0.625;
    std::size_t max_iters = 30;
    /// Output magnitude cap for the tanh rule.
    double llr_clip = 30.0;
    /// Stop as soon as the hard decisions reproduce the syndrome.
    bool early_stop = true;
};

/// Parses "tanh", "jacobian" or "minsum[:alpha]".
BpConfig parse_bp_variant(const std::string &spec, BpConfig base = {});
std::string bp_variant_name(const BpConfig &cfg);

/// Magnitude used for messages that carry certainty (e.g. from degree-1 checks).
inline constexpr double kCertainLlr = 1000.0;

/// LLR of the XOR of two independent bits with LLRs a and b.
double llr_xor(double a, double b);

/// Outgoing check-to-variable messages of one check: out[t] combines every in[u], u != t,
/// and is negated when the syndrome bit is set.
void check_update(const BpConfig &cfg, bool syndrome_bit, std::span<const double> in, std::span<double> out);

/// Outgoing variable-to-check messages of one variable; returns the posterior LLR.
double variable_update(double prior, std::span<const double> in, std::span<double> out);

/// ln((1-p)/p).
double prior_llr(double p);

struct BpResult {
    bool converged = false;
    BitVector hard_decisions;
    std::vector<double> posteriors;
    std::size_t iterations = 0;
};

/// Flooding-schedule BP on the Tanner graph of H. Holds per-decode scratch: use one
/// instance per thread.
class BpDecoder {
   public:
    BpDecoder(const BitMatrix &h, BpConfig cfg = {});

    const BpConfig &config() const {
        return cfg_;
    }
    void set_config(const BpConfig &cfg) {
        cfg_ = cfg;
    }
    std::size_t checks() const {
        return n_checks_;
    }
    std::size_t variables() const {
        return n_vars_;
    }

    BpResult decode(const BitVector &syndrome, std::span<const double> priors);

   private:
    bool matches_syndrome(const BitVector &hard, const BitVector &syndrome) const;

    BpConfig cfg_;
    std::size_t n_checks_ = 0;
    std::size_t n_vars_ = 0;
    // Edges are numbered check-major.
    std::vector<std::size_t> check_ptr_;
    std::vector<Index> edge_var_;
    std::vector<std::size_t> var_ptr_;
    std::vector<std::size_t> var_edges_;

    std::vector<double> v2c_;
    std::vector<double> c2v_;
    std::vector<double> scratch_in_;
    std::vector<double> scratch_out_;
};

BpResult bp_decode(const BitMatrix &h, const BitVector &syndrome, std::span<const double> priors,
                   const BpConfig &cfg = {});

}  // namespace ssdec

#endif
