#include "ssdec/noise_sim.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ssdec {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t L, std::uint64_t p_index, std::uint64_t trial) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ L);
    h = splitmix64(h ^ p_index);
    return splitmix64(h ^ trial);
}

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

BitVector bernoulli_vector(std::size_t n, double p, std::mt19937_64 &rng) {
    BitVector v(n);
    if (p <= 0.0) {
        return v;
    }
    for (std::size_t i = 0; i < n; i++) {
        if (uniform01(rng) < p) {
            v.set(i);
        }
    }
    return v;
}

const char *decoder_stage_name(DecoderStage stage) {
    return stage == DecoderStage::SingleStage ? "single" : "two";
}

bool failure_check(const CssCode &code, const BitVector &residual, Side side) {
    if (!matvec(code.checks(side), residual).is_zero()) {
        throw std::logic_error("failure_check: residual has a nonzero syndrome");
    }
    return !matvec(code.detecting_logicals(side), residual).is_zero();
}

struct TrialRunner::Impl {
    Impl(const CssCode &c, Side s, NoiseModel nm, DecoderSettings ds)
        : code(c),
          side(s),
          noise(nm),
          settings(ds),
          h(c.checks(s)),
          final_decoder(h, ds.bp, ds.osd),
          final_priors(uniform_priors(h.cols(), nm.p_data)) {
        if (ds.stage == DecoderStage::TwoStage) {
            two_stage.emplace(c, s, ds.bp, ds.osd, nm.p_data, nm.p_meas);
        } else {
            single_stage.emplace(build_single_stage(c, s, ds.metachecks, nm.p_data, nm.p_meas), ds.bp, ds.osd);
        }
    }

    const CssCode &code;
    Side side;
    NoiseModel noise;
    DecoderSettings settings;
    const BitMatrix &h;
    BpOsdDecoder final_decoder;
    std::vector<double> final_priors;
    std::optional<SingleStageDecoder> single_stage;
    std::optional<TwoStageDecoder> two_stage;
};

TrialRunner::TrialRunner(const CssCode &code, Side side, NoiseModel noise, DecoderSettings settings)
    : impl_(std::make_unique<Impl>(code, side, noise, settings)) {
}

TrialRunner::~TrialRunner() = default;
TrialRunner::TrialRunner(TrialRunner &&) noexcept = default;

TrialRecord TrialRunner::run(std::size_t rounds, std::mt19937_64 &rng, const BitVector *injected) {
    auto &s = *impl_;
    const std::size_t n = s.h.cols();
    const std::size_t r = s.h.rows();
    TrialRecord rec;
    BitVector e(n);
    if (injected) {
        if (injected->size() != n) {
            throw std::invalid_argument("injected error has the wrong length");
        }
        e ^= *injected;
    }
    for (std::size_t round = 0; round < rounds; round++) {
        e ^= bernoulli_vector(n, s.noise.p_data, rng);
        auto syndrome = matvec(s.h, e) ^ bernoulli_vector(r, s.noise.p_meas, rng);
        DecodeOutcome out = s.two_stage ? s.two_stage->decode(syndrome) : s.single_stage->decode(syndrome);
        rec.rounds_bp_converged += out.bp_converged;
        rec.metacode_failures += out.metacode_failure;
        e ^= out.data_correction;
    }
    if (rounds == 0) {
        // Code capacity: one round of data noise observed only by the perfect round.
        e ^= bernoulli_vector(n, s.noise.p_data, rng);
    }
    auto syndrome = matvec(s.h, e);
    auto fin = s.final_decoder.decode(syndrome, s.final_priors);
    rec.rounds_bp_converged += fin.bp_converged;
    e ^= fin.correction;
    rec.residual_weight_final = e.weight();
    if (!matvec(s.h, e).is_zero()) {
        rec.invalid_final = true;
        rec.failed = true;
        return rec;
    }
    rec.failed = failure_check(s.code, e, s.side);
    return rec;
}

TrialRecord run_trial(const CssCode &code, Side side, NoiseModel noise, std::size_t rounds,
                      const DecoderSettings &settings, std::mt19937_64 &rng, const BitVector *injected) {
    TrialRunner runner(code, side, noise, settings);
    return runner.run(rounds, rng, injected);
}

std::vector<TrialRecord> run_trials(const CssCode &code, Side side, NoiseModel noise, std::size_t rounds,
                                    const DecoderSettings &settings, std::size_t trials, std::size_t workers,
                                    std::uint64_t master_seed, std::uint64_t L_key, std::uint64_t p_index) {
    std::vector<TrialRecord> out(trials);
    workers = std::max<std::size_t>(1, std::min(workers, trials));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&]() {
        try {
            TrialRunner runner(code, side, noise, settings);
            for (std::size_t t; (t = next.fetch_add(1)) < trials;) {
                std::mt19937_64 rng(trial_seed(master_seed, L_key, p_index, t));
                out[t] = runner.run(rounds, rng);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
            next = trials;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

const std::vector<std::string> &campaign_csv_columns() {
    static const std::vector<std::string> cols{
        "code_name", "D",          "i",          "L",         "side",         "p_data",
        "p_meas",    "n_rounds",   "trials",     "failures",  "bp_variant",   "max_iters",
        "osd_strategy", "osd_param", "metachecks", "decoder_stage", "master_seed"};
    return cols;
}

std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", p);
    return buf;
}

std::string csv_header() {
    std::string out;
    for (const auto &c : campaign_csv_columns()) {
        if (!out.empty()) {
            out += ',';
        }
        out += c;
    }
    return out;
}

namespace {

std::vector<std::string> row_fields(const CampaignRow &r) {
    return {r.code_name,
            std::to_string(r.D),
            std::to_string(r.i),
            std::to_string(r.L),
            side_name(r.side),
            format_probability(r.p_data),
            format_probability(r.p_meas),
            std::to_string(r.n_rounds),
            std::to_string(r.trials),
            std::to_string(r.failures),
            r.bp_variant,
            std::to_string(r.max_iters),
            r.osd_strategy,
            std::to_string(r.osd_param),
            r.metachecks ? "1" : "0",
            decoder_stage_name(r.decoder_stage),
            std::to_string(r.master_seed)};
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string CampaignRow::key() const {
    auto f = row_fields(*this);
    std::string out;
    for (std::size_t c = 0; c < f.size(); c++) {
        if (c == 8 || c == 9) {
            continue;
        }
        out += f[c];
        out += ',';
    }
    return out;
}

std::string csv_line(const CampaignRow &row) {
    std::string out;
    for (const auto &f : row_fields(row)) {
        if (!out.empty()) {
            out += ',';
        }
        out += f;
    }
    return out;
}

void write_csv(std::ostream &out, const std::vector<CampaignRow> &rows, bool header) {
    if (header) {
        out << csv_header() << '\n';
    }
    for (const auto &r : rows) {
        out << csv_line(r) << '\n';
    }
}

std::vector<CampaignRow> read_campaign_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("campaign CSV is empty");
    }
    auto header = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t c = 0; c < header.size(); c++) {
        col[header[c]] = c;
    }
    for (const auto &name : campaign_csv_columns()) {
        if (!col.count(name)) {
            throw std::runtime_error("campaign CSV is missing column '" + name + "'");
        }
    }
    std::vector<CampaignRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto f = split_csv(line);
        if (f.size() != header.size()) {
            throw std::runtime_error("campaign CSV line " + std::to_string(line_no) + ": wrong number of fields");
        }
        auto get = [&](const char *name) -> const std::string & { return f[col.at(name)]; };
        try {
            CampaignRow r;
            r.code_name = get("code_name");
            r.D = std::stoul(get("D"));
            r.i = std::stoul(get("i"));
            r.L = std::stoul(get("L"));
            r.side = parse_side(get("side"));
            r.p_data = std::stod(get("p_data"));
            r.p_meas = std::stod(get("p_meas"));
            r.n_rounds = std::stoul(get("n_rounds"));
            r.trials = std::stoul(get("trials"));
            r.failures = std::stoul(get("failures"));
            r.bp_variant = get("bp_variant");
            r.max_iters = std::stoul(get("max_iters"));
            r.osd_strategy = get("osd_strategy");
            r.osd_param = std::stoul(get("osd_param"));
            r.metachecks = get("metachecks") == "1";
            r.decoder_stage = get("decoder_stage") == "two" ? DecoderStage::TwoStage : DecoderStage::SingleStage;
            r.master_seed = std::stoull(get("master_seed"));
            if (r.failures > r.trials) {
                throw std::runtime_error("failures exceed trials");
            }
            rows.push_back(std::move(r));
        } catch (const std::exception &ex) {
            throw std::runtime_error("campaign CSV line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return rows;
}

std::vector<CampaignRow> read_campaign_csv_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_campaign_csv(in);
}

std::vector<CampaignRow> run_campaign(const CampaignSpec &spec, const std::function<void(const CampaignRow &)> &on_row,
                                      const std::vector<std::string> &skip_keys) {
    std::set<std::string> skip(skip_keys.begin(), skip_keys.end());
    std::vector<CampaignRow> rows;
    for (auto L : spec.L_values) {
        std::optional<CssCode> code;
        for (std::size_t pi = 0; pi < spec.p_values.size(); pi++) {
            for (auto rounds : spec.rounds) {
                double p = spec.p_values[pi];
                NoiseModel noise{p, spec.p_meas < 0 ? p : spec.p_meas};
                if (!code) {
                    code = spec.make_code(L);
                }
                DecoderSettings settings = spec.settings;
                if (spec.metachecks_if_available) {
                    settings.metachecks = settings.metachecks && code->metachecks(spec.side).has_value();
                }
                CampaignRow row;
                row.code_name = spec.code_name;
                row.D = code->D;
                row.i = code->degree;
                row.L = L;
                row.side = spec.side;
                row.p_data = noise.p_data;
                row.p_meas = noise.p_meas;
                row.n_rounds = rounds;
                row.trials = spec.trials;
                row.bp_variant = bp_variant_name(settings.bp);
                row.max_iters = settings.bp.max_iters;
                row.osd_strategy = osd_strategy_name(settings.osd);
                row.osd_param = osd_param(settings.osd);
                row.metachecks = settings.stage == DecoderStage::TwoStage || settings.metachecks;
                row.decoder_stage = settings.stage;
                row.master_seed = spec.master_seed;
                if (skip.count(row.key())) {
                    continue;
                }
                auto records = run_trials(*code, spec.side, noise, rounds, settings, spec.trials, spec.workers,
                                          spec.master_seed, L, pi);
                for (const auto &rec : records) {
                    row.failures += rec.failed;
                }
                if (on_row) {
                    on_row(row);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

}  // namespace ssdec
