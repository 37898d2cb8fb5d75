#include "ssdec/ssdec.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ssdec/analysis.h"
#include "ssdec/codes.h"
#include "ssdec/experiments.h"
#include "ssdec/gf2_linalg.h"
#include "ssdec/noise_sim.h"
#include "ssdec/single_shot.h"

struct ssdec_code {
    ssdec::CssCode code;
};

struct ssdec_decoder {
    ssdec::Side side;
    std::size_t n_data = 0;
    std::size_t n_synd = 0;
    std::variant<std::unique_ptr<ssdec::SingleStageDecoder>, std::unique_ptr<ssdec::TwoStageDecoder>> impl;
};

struct ssdec_sim_config {
    std::string code_spec = "toric3d";
    std::vector<std::size_t> L{4};
    std::vector<double> p{0.01};
    double p_meas = -1.0;
    std::vector<std::size_t> rounds{1};
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t workers = 0;
    ssdec::BpConfig bp;
    ssdec::OsdConfig osd;
    // -1 auto, 0 off, 1 on.
    int metachecks = -1;
    bool two_stage = false;
    ssdec::Side side = ssdec::Side::Z;
};

namespace {

thread_local std::string g_last_error;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
ssdec_status guarded(F &&f) {
    try {
        g_last_error.clear();
        f();
        return SSDEC_OK;
    } catch (const IoError &e) {
        g_last_error = e.what();
        return SSDEC_ERR_IO;
    } catch (const ssdec::InconsistentSystem &e) {
        g_last_error = e.what();
        return SSDEC_ERR_INCONSISTENT;
    } catch (const std::invalid_argument &e) {
        g_last_error = e.what();
        return SSDEC_ERR_INVALID_ARGUMENT;
    } catch (const std::out_of_range &e) {
        g_last_error = e.what();
        return SSDEC_ERR_INVALID_ARGUMENT;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return SSDEC_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return SSDEC_ERR_RUNTIME;
    }
}

void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

void copy_out(const std::string &s, char *buf, std::size_t len, std::size_t *needed) {
    if (needed) {
        *needed = s.size();
    }
    if (buf && len > 0) {
        std::size_t m = std::min(len - 1, s.size());
        std::memcpy(buf, s.data(), m);
        buf[m] = '\0';
    }
}

std::uint64_t c_distance(const std::optional<ssdec::Distance> &d) {
    if (!d) {
        return SSDEC_DISTANCE_UNKNOWN;
    }
    if (*d == ssdec::kInfiniteDistance) {
        return SSDEC_DISTANCE_INFINITE;
    }
    return *d;
}

ssdec::Side to_side(ssdec_side s) {
    require(s == SSDEC_SIDE_Z || s == SSDEC_SIDE_X, "side must be SSDEC_SIDE_Z or SSDEC_SIDE_X");
    return s == SSDEC_SIDE_Z ? ssdec::Side::Z : ssdec::Side::X;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

std::size_t parse_count(const std::string &key, const std::string &v) {
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        require(!v.empty() && v[0] != '-', "");
        x = std::stoull(v, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    require(used == v.size() && used > 0, key + ": expected a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(x);
}

double parse_real(const std::string &key, const std::string &v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    require(used == v.size() && used > 0 && std::isfinite(x), key + ": expected a number, got '" + v + "'");
    return x;
}

std::vector<std::size_t> parse_count_list(const std::string &key, const std::string &v) {
    std::vector<std::size_t> out;
    for (const auto &item : split(v, ',')) {
        out.push_back(parse_count(key, item));
    }
    require(!out.empty(), key + ": empty list");
    return out;
}

std::vector<double> parse_probability_list(const std::string &key, const std::string &v) {
    std::vector<double> out;
    auto parts = split(v, ':');
    if (parts.size() == 3) {
        double a = parse_real(key, parts[0]);
        double b = parse_real(key, parts[1]);
        double step = parse_real(key, parts[2]);
        require(step > 0 && b >= a, key + ": range needs start <= stop and step > 0");
        auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; k++) {
            out.push_back(a + step * k);
        }
    } else {
        require(parts.size() == 1, key + ": expected a list or start:stop:step");
        for (const auto &item : split(v, ',')) {
            out.push_back(parse_real(key, item));
        }
    }
    require(!out.empty(), key + ": empty list");
    for (auto p : out) {
        require(p >= 0 && p <= 0.5, key + ": probabilities must lie in [0, 0.5]");
    }
    return out;
}

bool parse_flag(const std::string &key, const std::string &v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") {
        return true;
    }
    if (v == "0" || v == "false" || v == "off" || v == "no") {
        return false;
    }
    throw std::invalid_argument(key + ": expected a boolean, got '" + v + "'");
}

struct OutputTarget {
    std::ofstream file;
    std::ostream *out = &std::cout;

    explicit OutputTarget(const char *path) {
        if (path && *path) {
            file.open(path);
            if (!file) {
                throw IoError(std::string("cannot open '") + path + "' for writing");
            }
            out = &file;
        }
    }
    void finish(const char *path) {
        out->flush();
        if (!*out) {
            throw IoError(std::string("write failed for '") + (path ? path : "stdout") + "'");
        }
    }
};

ssdec::BpConfig bp_from(const char *spec, unsigned max_iters) {
    ssdec::BpConfig cfg;
    if (spec && *spec) {
        cfg = ssdec::parse_bp_variant(spec);
    }
    if (max_iters > 0) {
        cfg.max_iters = max_iters;
    }
    return cfg;
}

}  // namespace

extern "C" {

const char *ssdec_last_error(void) {
    return g_last_error.c_str();
}

const char *ssdec_version(void) {
    return "0.1.0";
}

ssdec_status ssdec_code_toric(unsigned D, unsigned i, unsigned L, ssdec_code **out) {
    return guarded([&] {
        require(out, "out is null");
        *out = new ssdec_code{ssdec::toric_code(D, i, L)};
    });
}

ssdec_status ssdec_code_hgp4d(const char *path, ssdec_code **out) {
    return guarded([&] {
        require(out && path, "null argument");
        if (!std::filesystem::exists(path)) {
            throw IoError(std::string("no such file '") + path + "'");
        }
        ssdec::CodeSpec spec = ssdec::parse_code_spec(std::string("hgp4d:") + path);
        *out = new ssdec_code{ssdec::build_code(spec, 0)};
    });
}

ssdec_status ssdec_code_hgp2d(const char *path_a, const char *path_b, ssdec_code **out) {
    return guarded([&] {
        require(out && path_a && path_b, "null argument");
        for (auto p : {path_a, path_b}) {
            if (!std::filesystem::exists(p)) {
                throw IoError(std::string("no such file '") + p + "'");
            }
        }
        ssdec::CodeSpec spec = ssdec::parse_code_spec(std::string("hgp2d:") + path_a + "," + path_b);
        *out = new ssdec_code{ssdec::build_code(spec, 0)};
    });
}

ssdec_status ssdec_code_from_spec(const char *spec, unsigned L, ssdec_code **out) {
    return guarded([&] {
        require(out && spec, "null argument");
        *out = new ssdec_code{ssdec::build_code(ssdec::parse_code_spec(spec), L)};
    });
}

void ssdec_code_free(ssdec_code *code) {
    delete code;
}

ssdec_status ssdec_code_get_params(const ssdec_code *code, ssdec_code_params *out) {
    return guarded([&] {
        require(code && out, "null argument");
        auto p = ssdec::code_params(code->code);
        *out = ssdec_code_params{};
        out->n = p.n;
        out->k = p.k;
        out->dz = c_distance(p.dz);
        out->dx = c_distance(p.dx);
        out->hx_row_weight = p.hx_row_weight;
        out->hx_col_weight = p.hx_col_weight;
        out->hz_row_weight = p.hz_row_weight;
        out->hz_col_weight = p.hz_col_weight;
        out->x_checks = p.x_checks;
        out->z_checks = p.z_checks;
        out->x_metachecks = p.x_metachecks;
        out->z_metachecks = p.z_metachecks;
        out->has_x_metachecks = code->code.mx.has_value();
        out->has_z_metachecks = code->code.mz.has_value();
    });
}

ssdec_status ssdec_code_name(const ssdec_code *code, char *buf, size_t len, size_t *needed) {
    return guarded([&] {
        require(code, "null code");
        copy_out(code->code.name, buf, len, needed);
    });
}

ssdec_status ssdec_code_invariant_report(const ssdec_code *code, char *buf, size_t len, size_t *needed,
                                         int *all_ok) {
    return guarded([&] {
        require(code, "null code");
        std::string report;
        bool ok = true;
        for (const auto &c : ssdec::check_invariants(code->code)) {
            report += c.name + ": " + (c.ok ? "ok" : "FAILED") + "\n";
            ok = ok && c.ok;
        }
        copy_out(report, buf, len, needed);
        if (all_ok) {
            *all_ok = ok;
        }
    });
}

ssdec_status ssdec_code_export(const ssdec_code *code, const char *dir) {
    return guarded([&] {
        require(code && dir, "null argument");
        try {
            ssdec::export_code(code->code, dir);
        } catch (const std::invalid_argument &) {
            throw;
        } catch (const std::exception &e) {
            throw IoError(e.what());
        }
    });
}

ssdec_status ssdec_code_brute_force_distance(const ssdec_code *code, ssdec_side side, uint64_t *out) {
    return guarded([&] {
        require(code && out, "null argument");
        *out = c_distance(ssdec::brute_force_distance(code->code, to_side(side)));
    });
}

void ssdec_decoder_options_default(ssdec_decoder_options *opts) {
    if (!opts) {
        return;
    }
    *opts = ssdec_decoder_options{};
    opts->side = SSDEC_SIDE_Z;
    opts->bp = nullptr;
    opts->max_iters = 30;
    opts->osd = nullptr;
    opts->metachecks = 1;
    opts->two_stage = 0;
    opts->p_data = 0.01;
    opts->p_meas = 0.01;
}

ssdec_status ssdec_decoder_new(const ssdec_code *code, const ssdec_decoder_options *opts, ssdec_decoder **out) {
    return guarded([&] {
        require(code && out, "null argument");
        ssdec_decoder_options o;
        ssdec_decoder_options_default(&o);
        if (opts) {
            o = *opts;
        }
        auto side = to_side(o.side);
        auto bp = bp_from(o.bp, o.max_iters);
        auto osd = o.osd && *o.osd ? ssdec::parse_osd(o.osd) : ssdec::OsdConfig{};
        require(o.p_data > 0 && o.p_data < 1 && o.p_meas > 0 && o.p_meas < 1,
                "decoder priors need 0 < p < 1");
        const auto &c = code->code;
        auto dec = std::make_unique<ssdec_decoder>();
        dec->side = side;
        dec->n_data = c.n;
        dec->n_synd = c.checks(side).rows();
        if (o.two_stage) {
            require(c.metachecks(side).has_value(), "two-stage decoding needs metachecks");
            dec->impl = std::make_unique<ssdec::TwoStageDecoder>(c, side, bp, osd, o.p_data, o.p_meas);
        } else {
            auto problem = ssdec::build_single_stage(c, side, o.metachecks != 0, o.p_data, o.p_meas);
            dec->impl = std::make_unique<ssdec::SingleStageDecoder>(std::move(problem), bp, osd);
        }
        *out = dec.release();
    });
}

void ssdec_decoder_free(ssdec_decoder *dec) {
    delete dec;
}

size_t ssdec_decoder_syndrome_length(const ssdec_decoder *dec) {
    return dec ? dec->n_synd : 0;
}

size_t ssdec_decoder_data_length(const ssdec_decoder *dec) {
    return dec ? dec->n_data : 0;
}

ssdec_status ssdec_decoder_decode(ssdec_decoder *dec, const uint8_t *syndrome, uint8_t *data_correction,
                                  uint8_t *meas_correction, int *bp_converged) {
    return guarded([&] {
        require(dec && syndrome, "null argument");
        ssdec::BitVector s(dec->n_synd);
        for (std::size_t j = 0; j < dec->n_synd; j++) {
            require(syndrome[j] <= 1, "syndrome bytes must be 0 or 1");
            if (syndrome[j]) {
                s.set(j);
            }
        }
        auto outcome = std::visit([&](auto &d) { return d->decode(s); }, dec->impl);
        if (data_correction) {
            for (std::size_t q = 0; q < dec->n_data; q++) {
                data_correction[q] = outcome.data_correction.get(q);
            }
        }
        if (meas_correction) {
            for (std::size_t j = 0; j < dec->n_synd; j++) {
                meas_correction[j] = outcome.meas_correction.size() > j && outcome.meas_correction.get(j);
            }
        }
        if (bp_converged) {
            *bp_converged = outcome.bp_converged;
        }
    });
}

ssdec_status ssdec_sim_config_new(ssdec_sim_config **out) {
    return guarded([&] {
        require(out, "out is null");
        *out = new ssdec_sim_config;
    });
}

void ssdec_sim_config_free(ssdec_sim_config *cfg) {
    delete cfg;
}

ssdec_status ssdec_sim_config_set(ssdec_sim_config *cfg, const char *key_c, const char *value_c) {
    return guarded([&] {
        require(cfg && key_c && value_c, "null argument");
        std::string key = trim(key_c);
        std::string v = trim(value_c);
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "code") {
            ssdec::parse_code_spec(v);
            cfg->code_spec = v;
        } else if (key == "L") {
            auto Ls = parse_count_list(key, v);
            for (auto L : Ls) {
                require(L >= 2, "L: lattice sizes must be at least 2");
            }
            cfg->L = Ls;
        } else if (key == "p") {
            cfg->p = parse_probability_list(key, v);
        } else if (key == "p_meas") {
            double q = parse_real(key, v);
            require(q >= 0 && q <= 0.5, "p_meas must lie in [0, 0.5]");
            cfg->p_meas = q;
        } else if (key == "rounds") {
            cfg->rounds = parse_count_list(key, v);
        } else if (key == "trials") {
            cfg->trials = parse_count(key, v);
            require(cfg->trials >= 1, "trials must be positive");
        } else if (key == "seed") {
            cfg->seed = parse_count(key, v);
        } else if (key == "workers") {
            cfg->workers = parse_count(key, v);
        } else if (key == "osd") {
            cfg->osd = ssdec::parse_osd(v);
        } else if (key == "bp") {
            auto iters = cfg->bp.max_iters;
            cfg->bp = ssdec::parse_bp_variant(v);
            cfg->bp.max_iters = iters;
        } else if (key == "max_iters") {
            cfg->bp.max_iters = parse_count(key, v);
            require(cfg->bp.max_iters >= 1, "max_iters must be at least 1");
        } else if (key == "metachecks") {
            cfg->metachecks = v == "auto" ? -1 : parse_flag(key, v);
        } else if (key == "two_stage") {
            cfg->two_stage = parse_flag(key, v);
        } else if (key == "side") {
            cfg->side = ssdec::parse_side(v);
        } else {
            throw std::invalid_argument("unknown configuration key '" + key + "'");
        }
    });
}

ssdec_status ssdec_simulate(const ssdec_sim_config *cfg, const char *out_csv, ssdec_row_callback on_row, void *user) {
    return guarded([&] {
        require(cfg, "null config");
        auto code_spec = ssdec::parse_code_spec(cfg->code_spec);
        ssdec::CampaignSpec spec;
        spec.code_name = code_spec.name;
        spec.make_code = [code_spec](std::size_t L) { return ssdec::build_code(code_spec, L); };
        spec.L_values = code_spec.uses_L ? cfg->L : std::vector<std::size_t>{0};
        spec.p_values = cfg->p;
        spec.p_meas = cfg->p_meas;
        spec.rounds = cfg->rounds;
        spec.trials = cfg->trials;
        spec.master_seed = cfg->seed;
        spec.workers = cfg->workers ? cfg->workers : std::max(1u, std::thread::hardware_concurrency());
        spec.side = cfg->side;
        spec.settings.bp = cfg->bp;
        spec.settings.osd = cfg->osd;
        spec.settings.stage = cfg->two_stage ? ssdec::DecoderStage::TwoStage : ssdec::DecoderStage::SingleStage;
        spec.settings.metachecks = cfg->metachecks != 0;
        spec.metachecks_if_available = cfg->metachecks == -1;

        // Construction and decoder-configuration errors surface before any output is written.
        auto probe = spec.make_code(spec.L_values.front());
        bool has_meta = probe.metachecks(spec.side).has_value();
        if (cfg->two_stage) {
            require(has_meta, "--two-stage needs metachecks, which " + probe.name + " lacks on side " +
                                  ssdec::side_name(spec.side));
            require(cfg->metachecks != 0, "--two-stage cannot be combined with --no-metachecks");
        }
        if (cfg->metachecks == 1) {
            require(has_meta, probe.name + " has no metachecks on side " + std::string(ssdec::side_name(spec.side)));
        }

        std::vector<std::string> existing;
        std::ofstream file;
        if (out_csv && *out_csv) {
            bool fresh = !std::filesystem::exists(out_csv) || std::filesystem::file_size(out_csv) == 0;
            if (!fresh) {
                for (const auto &row : ssdec::read_campaign_csv_file(out_csv)) {
                    existing.push_back(row.key());
                }
            }
            file.open(out_csv, std::ios::app);
            if (!file) {
                throw IoError(std::string("cannot open '") + out_csv + "' for writing");
            }
            if (fresh) {
                file << ssdec::csv_header() << '\n';
                file.flush();
            }
        }
        ssdec::run_campaign(
            spec,
            [&](const ssdec::CampaignRow &row) {
                auto line = ssdec::csv_line(row);
                if (file.is_open()) {
                    file << line << '\n';
                    file.flush();
                    if (!file) {
                        throw IoError(std::string("write failed for '") + out_csv + "'");
                    }
                }
                if (on_row) {
                    on_row(line.c_str(), user);
                }
            },
            existing);
    });
}

ssdec_status ssdec_analyze(const char *in_csv, const char *out_json, size_t bootstrap) {
    return guarded([&] {
        require(in_csv, "null input path");
        if (!std::filesystem::exists(in_csv)) {
            throw IoError(std::string("no such file '") + in_csv + "'");
        }
        require(std::filesystem::file_size(in_csv) > 0, std::string("'") + in_csv + "' is empty");
        auto rows = ssdec::read_campaign_csv_file(in_csv);
        require(!rows.empty(), std::string("'") + in_csv + "' holds no campaign rows");
        auto result = ssdec::analyze_campaign(rows, bootstrap);
        OutputTarget out(out_json);
        *out.out << result.dump(2) << '\n';
        out.finish(out_json);
    });
}

ssdec_status ssdec_experiment_bp_locality(unsigned L, double p, unsigned max_iters, const unsigned *ls, size_t n_ls,
                                          const char *bp, const char *out_path) {
    return guarded([&] {
        require(ls && n_ls > 0, "need at least one string length");
        require(p > 0 && p < 1, "p must lie in (0, 1)");
        require(max_iters >= 1, "max_iters must be at least 1");
        auto variant = bp_from(bp, max_iters).variant;
        std::vector<ssdec::LocalityCase> cases;
        for (std::size_t k = 0; k < n_ls; k++) {
            cases.push_back(ssdec::bp_locality_case(L, ls[k], p, max_iters, variant));
        }
        OutputTarget out(out_path);
        ssdec::write_locality_csv(*out.out, cases);
        out.finish(out_path);
    });
}

ssdec_status ssdec_experiment_underflow(double x_min, double x_max, double step, int smoothed, const char *out_path) {
    return guarded([&] {
        require(step > 0 && x_max >= x_min, "underflow grid needs x_min <= x_max and step > 0");
        std::vector<double> grid;
        auto count = static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
        require(count <= 10'000'000, "underflow grid too large");
        for (std::size_t k = 0; k < count; k++) {
            grid.push_back(x_min + step * k);
        }
        auto points = smoothed ? ssdec::underflow_scan_smoothed(grid) : ssdec::underflow_scan(grid);
        OutputTarget out(out_path);
        ssdec::write_underflow_csv(*out.out, points);
        out.finish(out_path);
    });
}

ssdec_status ssdec_experiment_half_cube_census(const unsigned *Ls, size_t n_L, const double *ps, size_t n_p,
                                               size_t trials, uint64_t seed, unsigned max_iters,
                                               const char *out_path) {
    return guarded([&] {
        require(Ls && ps && n_L > 0 && n_p > 0, "need at least one L and one p");
        ssdec::BpConfig bp;
        if (max_iters > 0) {
            bp.max_iters = max_iters;
        }
        std::vector<ssdec::HalfCubeCensus> rows;
        for (std::size_t a = 0; a < n_L; a++) {
            for (std::size_t b = 0; b < n_p; b++) {
                require(ps[b] >= 0 && ps[b] <= 1, "p must lie in [0, 1]");
                std::mt19937_64 rng(ssdec::trial_seed(seed, Ls[a], b, 0));
                rows.push_back(ssdec::half_cube_census(Ls[a], ps[b], trials, rng, bp));
            }
        }
        OutputTarget out(out_path);
        ssdec::write_census_csv(*out.out, rows);
        out.finish(out_path);
    });
}

}  // extern "C"
