#ifndef SSDEC_SINGLE_SHOT_H
#define SSDEC_SINGLE_SHOT_H

#include <optional>
#include <span>
#include <vector>

#include "ssdec/bitmatrix.h"
#include "ssdec/bp_decoder.h"
#include "ssdec/codes.h"
#include "ssdec/osd.h"

namespace ssdec {

/// Probabilities below this are clamped before forming priors.
inline constexpr double kMinProbability = 1e-9;

struct SingleStageProblem {
    /// [H | I], or [[H, I], [0, M]] when metachecks are included.
    BitMatrix h_aug;
    std::size_t n_data = 0;
    std::size_t n_synd = 0;
    bool metachecks_included = false;
    std::optional<BitMatrix> m;
    double prior_data = 0.01;
    double prior_meas = 0.01;
};

SingleStageProblem build_single_stage(const CssCode &code, Side side, bool with_metachecks, double p_data = 0.01,
                                      double p_meas = 0.01);

/// s unchanged without metachecks, (s, M s) with them.
BitVector transform_syndrome(const SingleStageProblem &problem, const BitVector &s);

/// Data variables get ln((1-p_data)/p_data), syndrome-error variables ln((1-p_meas)/p_meas).
/// The perfect final round is decoded on the bare matrix, so `final_round` is rejected.
std::vector<double> assign_priors(const SingleStageProblem &problem, double p_data, double p_meas,
                                  bool final_round = false);

/// Uniform prior vector for a bare check matrix.
std::vector<double> uniform_priors(std::size_t n, double p);

struct DecodeOutcome {
    BitVector data_correction;
    BitVector meas_correction;
    bool bp_converged = false;
    bool used_osd = false;
    bool metacode_failure = false;
};

/// BP with OSD fallback on one matrix. One instance per thread.
class BpOsdDecoder {
   public:
    BpOsdDecoder(const BitMatrix &h, BpConfig bp, OsdConfig osd);

    struct Result {
        BitVector correction;
        bool bp_converged = false;
        bool used_osd = false;
    };

    Result decode(const BitVector &syndrome, std::span<const double> priors);

    const BitMatrix &matrix() const {
        return osd_.matrix();
    }

   private:
    BpDecoder bp_;
    OsdDecoder osd_;
    OsdConfig osd_cfg_;
};

class SingleStageDecoder {
   public:
    SingleStageDecoder(SingleStageProblem problem, BpConfig bp, OsdConfig osd);

    const SingleStageProblem &problem() const {
        return problem_;
    }
    /// Decodes with the problem's own priors.
    DecodeOutcome decode(const BitVector &s);
    DecodeOutcome decode(const BitVector &s, std::span<const double> priors);

   private:
    SingleStageProblem problem_;
    std::vector<double> priors_;
    BpOsdDecoder inner_;
};

DecodeOutcome decode_single_stage(const SingleStageProblem &problem, const BitVector &s, const BpConfig &bp,
                                  const OsdConfig &osd);

/// Rows generating ker H^T modulo rowspace(M): the extra rows of M'.
BitMatrix metacode_logicals(const BitMatrix &h, const BitMatrix &m);

/// Two-stage baseline: repair the syndrome over the metacode, then decode the data.
class TwoStageDecoder {
   public:
    TwoStageDecoder(const CssCode &code, Side side, BpConfig bp, OsdConfig osd, double p_data = 0.01,
                    double p_meas = 0.01);

    DecodeOutcome decode(const BitVector &s);

    const BitMatrix &metacode_logicals() const {
        return lm_;
    }
    /// Whether s lies in the image of the check matrix.
    bool is_valid_syndrome(const BitVector &s) const;

   private:
    BitMatrix h_;
    BitMatrix m_;
    BitMatrix lm_;
    std::vector<double> meas_priors_;
    std::vector<double> data_priors_;
    BpOsdDecoder stage1_;
    BpOsdDecoder stage1_ext_;
    BpOsdDecoder stage2_;
};

DecodeOutcome decode_two_stage(const CssCode &code, Side side, const BitVector &s, const BpConfig &bp,
                               const OsdConfig &osd, double p_data = 0.01, double p_meas = 0.01);

}  // namespace ssdec

#endif
