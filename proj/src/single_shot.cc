#include "ssdec/single_shot.h"

#include <algorithm>
#include <stdexcept>

#include "ssdec/gf2_linalg.h"

namespace ssdec {

namespace {

double clamp_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probability outside [0, 1]");
    }
    return std::clamp(p, kMinProbability, 1.0 - kMinProbability);
}

}  // namespace

SingleStageProblem build_single_stage(const CssCode &code, Side side, bool with_metachecks, double p_data,
                                      double p_meas) {
    const auto &h = code.checks(side);
    SingleStageProblem problem;
    problem.n_data = h.cols();
    problem.n_synd = h.rows();
    problem.prior_data = p_data;
    problem.prior_meas = p_meas;
    auto top = hstack(h, BitMatrix::identity(h.rows()));
    if (!with_metachecks) {
        problem.h_aug = std::move(top);
        return problem;
    }
    const auto &m = code.metachecks(side);
    if (!m) {
        throw std::invalid_argument(std::string("code has no ") + (side == Side::Z ? "X" : "Z") +
                                    " metachecks for side " + side_name(side));
    }
    auto bottom = hstack(BitMatrix(m->rows(), h.cols()), *m);
    problem.h_aug = vstack(top, bottom);
    problem.m = *m;
    problem.metachecks_included = true;
    return problem;
}

BitVector transform_syndrome(const SingleStageProblem &problem, const BitVector &s) {
    if (s.size() != problem.n_synd) {
        throw std::invalid_argument("dimension mismatch in transform_syndrome");
    }
    if (!problem.metachecks_included) {
        return s;
    }
    return concat(s, matvec(*problem.m, s));
}

std::vector<double> assign_priors(const SingleStageProblem &problem, double p_data, double p_meas, bool final_round) {
    if (final_round) {
        throw std::invalid_argument("the final round is decoded on the bare check matrix, not the augmented problem");
    }
    std::vector<double> priors(problem.n_data + problem.n_synd);
    double ld = prior_llr(clamp_probability(p_data));
    double lm = prior_llr(clamp_probability(p_meas));
    std::fill(priors.begin(), priors.begin() + problem.n_data, ld);
    std::fill(priors.begin() + problem.n_data, priors.end(), lm);
    return priors;
}

std::vector<double> uniform_priors(std::size_t n, double p) {
    return std::vector<double>(n, prior_llr(clamp_probability(p)));
}

BpOsdDecoder::BpOsdDecoder(const BitMatrix &h, BpConfig bp, OsdConfig osd) : bp_(h, bp), osd_(h), osd_cfg_(osd) {
}

BpOsdDecoder::Result BpOsdDecoder::decode(const BitVector &syndrome, std::span<const double> priors) {
    auto bp = bp_.decode(syndrome, priors);
    Result out;
    out.bp_converged = bp.converged;
    if (bp.converged || osd_cfg_.method == OsdMethod::None) {
        out.correction = std::move(bp.hard_decisions);
        return out;
    }
    out.used_osd = true;
    out.correction = osd_.decode(syndrome, bp.posteriors, bp.hard_decisions, osd_cfg_);
    return out;
}

SingleStageDecoder::SingleStageDecoder(SingleStageProblem problem, BpConfig bp, OsdConfig osd)
    : problem_(std::move(problem)),
      priors_(assign_priors(problem_, problem_.prior_data, problem_.prior_meas)),
      inner_(problem_.h_aug, bp, osd) {
}

DecodeOutcome SingleStageDecoder::decode(const BitVector &s) {
    return decode(s, priors_);
}

DecodeOutcome SingleStageDecoder::decode(const BitVector &s, std::span<const double> priors) {
    auto res = inner_.decode(transform_syndrome(problem_, s), priors);
    DecodeOutcome out;
    out.data_correction = res.correction.slice(0, problem_.n_data);
    out.meas_correction = res.correction.slice(problem_.n_data, problem_.n_data + problem_.n_synd);
    out.bp_converged = res.bp_converged;
    out.used_osd = res.used_osd;
    return out;
}

DecodeOutcome decode_single_stage(const SingleStageProblem &problem, const BitVector &s, const BpConfig &bp,
                                  const OsdConfig &osd) {
    SingleStageDecoder dec(problem, bp, osd);
    return dec.decode(s);
}

BitMatrix metacode_logicals(const BitMatrix &h, const BitMatrix &m) {
    return quotient_basis(kernel_basis(h.transpose()), m);
}

namespace {

const BitMatrix &require_metachecks(const CssCode &code, Side side) {
    const auto &m = code.metachecks(side);
    if (!m) {
        throw std::invalid_argument(std::string("two-stage decoding needs metachecks for side ") + side_name(side));
    }
    return *m;
}

}  // namespace

TwoStageDecoder::TwoStageDecoder(const CssCode &code, Side side, BpConfig bp, OsdConfig osd, double p_data,
                                 double p_meas)
    : h_(code.checks(side)),
      m_(require_metachecks(code, side)),
      lm_(ssdec::metacode_logicals(h_, m_)),
      meas_priors_(uniform_priors(h_.rows(), p_meas)),
      data_priors_(uniform_priors(h_.cols(), p_data)),
      stage1_(m_, bp, osd),
      stage1_ext_(vstack(m_, lm_), bp, osd),
      stage2_(h_, bp, osd) {
}

bool TwoStageDecoder::is_valid_syndrome(const BitVector &s) const {
    // ker H^T is spanned by the rows of M together with L_M.
    return matvec(m_, s).is_zero() && matvec(lm_, s).is_zero();
}

DecodeOutcome TwoStageDecoder::decode(const BitVector &s) {
    DecodeOutcome out;
    auto metasyndrome = matvec(m_, s);
    auto first = stage1_.decode(metasyndrome, meas_priors_);
    auto repaired = s ^ first.correction;
    BitVector t = first.correction;
    out.used_osd = first.used_osd;
    if (!is_valid_syndrome(repaired)) {
        auto second = stage1_ext_.decode(concat(metasyndrome, matvec(lm_, s)), meas_priors_);
        t = second.correction;
        repaired = s ^ t;
        out.used_osd = out.used_osd || second.used_osd;
        if (!is_valid_syndrome(repaired)) {
            out.metacode_failure = true;
            out.data_correction = BitVector(h_.cols());
            out.meas_correction = t;
            return out;
        }
    }
    auto data = stage2_.decode(repaired, data_priors_);
    out.data_correction = std::move(data.correction);
    out.meas_correction = std::move(t);
    out.bp_converged = data.bp_converged;
    out.used_osd = out.used_osd || data.used_osd;
    return out;
}

DecodeOutcome decode_two_stage(const CssCode &code, Side side, const BitVector &s, const BpConfig &bp,
                               const OsdConfig &osd, double p_data, double p_meas) {
    TwoStageDecoder dec(code, side, bp, osd, p_data, p_meas);
    return dec.decode(s);
}

}  // namespace ssdec
