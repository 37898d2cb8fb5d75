#ifndef SSDEC_NOISE_SIM_H
#define SSDEC_NOISE_SIM_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ssdec/bitmatrix.h"
#include "ssdec/bp_decoder.h"
#include "ssdec/codes.h"
#include "ssdec/osd.h"
#include "ssdec/single_shot.h"

namespace ssdec {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the RNG stream for one trial; depends only on its arguments.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t L, std::uint64_t p_index, std::uint64_t trial);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64 &rng);

/// Each of the n bits is set independently with probability p.
BitVector bernoulli_vector(std::size_t n, double p, std::mt19937_64 &rng);

struct NoiseModel {
    double p_data = 0.0;
    double p_meas = 0.0;
};

enum class DecoderStage { SingleStage, TwoStage };

const char *decoder_stage_name(DecoderStage stage);

struct DecoderSettings {
    BpConfig bp;
    OsdConfig osd;
    bool metachecks = true;
    DecoderStage stage = DecoderStage::SingleStage;
};

struct TrialRecord {
    bool failed = false;
    std::size_t rounds_bp_converged = 0;
    std::size_t metacode_failures = 0;
    std::size_t residual_weight_final = 0;
    /// The final correction left a nonzero syndrome (only possible without OSD).
    bool invalid_final = false;
};

/// True iff the residual anticommutes with some detecting logical. Throws std::logic_error if
/// the residual has a nonzero syndrome.
bool failure_check(const CssCode &code, const BitVector &residual, Side side);

/// Runs phenomenological trials on one code. Holds decoder scratch: one instance per thread.
class TrialRunner {
   public:
    TrialRunner(const CssCode &code, Side side, NoiseModel noise, DecoderSettings settings);
    ~TrialRunner();
    TrialRunner(TrialRunner &&) noexcept;

    /// N noisy rounds then one perfect round. `injected` is added to the data error before round 1.
    /// With N = 0 the perfect round sees one round of data noise (code capacity).
    TrialRecord run(std::size_t rounds, std::mt19937_64 &rng, const BitVector *injected = nullptr);

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

TrialRecord run_trial(const CssCode &code, Side side, NoiseModel noise, std::size_t rounds,
                      const DecoderSettings &settings, std::mt19937_64 &rng, const BitVector *injected = nullptr);

struct CampaignRow {
    std::string code_name;
    std::size_t D = 0;
    std::size_t i = 0;
    std::size_t L = 0;
    Side side = Side::Z;
    double p_data = 0;
    double p_meas = 0;
    std::size_t n_rounds = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::string bp_variant;
    std::size_t max_iters = 0;
    std::string osd_strategy;
    std::size_t osd_param = 0;
    bool metachecks = false;
    DecoderStage decoder_stage = DecoderStage::SingleStage;
    std::uint64_t master_seed = 0;

    /// Every column except trials and failures, formatted as written.
    std::string key() const;
};

const std::vector<std::string> &campaign_csv_columns();
std::string format_probability(double p);
std::string csv_header();
std::string csv_line(const CampaignRow &row);
void write_csv(std::ostream &out, const std::vector<CampaignRow> &rows, bool header = true);
std::vector<CampaignRow> read_campaign_csv(std::istream &in);
std::vector<CampaignRow> read_campaign_csv_file(const std::string &path);

struct CampaignSpec {
    std::string code_name;
    /// Builds the code for lattice size L.
    std::function<CssCode(std::size_t)> make_code;
    std::vector<std::size_t> L_values;
    std::vector<double> p_values;
    /// Measurement error rate; negative means equal to p_data.
    double p_meas = -1.0;
    std::vector<std::size_t> rounds{1};
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
    Side side = Side::Z;
    DecoderSettings settings;
    /// Use metachecks only if the code provides them for the side.
    bool metachecks_if_available = false;
};

/// Grid points run in order (L, p, N); each row is passed to `on_row` when complete. Rows
/// whose key() is in `skip_keys` are not run.
std::vector<CampaignRow> run_campaign(const CampaignSpec &spec, const std::function<void(const CampaignRow &)> &on_row = {},
                                      const std::vector<std::string> &skip_keys = {});

/// Runs `trials` trials of one configuration in parallel; the outcome list is indexed by trial.
std::vector<TrialRecord> run_trials(const CssCode &code, Side side, NoiseModel noise, std::size_t rounds,
                                    const DecoderSettings &settings, std::size_t trials, std::size_t workers,
                                    std::uint64_t master_seed, std::uint64_t L_key, std::uint64_t p_index);

}  // namespace ssdec

#endif
