#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssdec/ssdec.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int report(ssdec_status st) {
    if (st == SSDEC_OK) {
        return 0;
    }
    std::cerr << "error: " << ssdec_last_error() << '\n';
    return st == SSDEC_ERR_INVALID_ARGUMENT ? kExitUsage : kExitRuntime;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Flat `key = value` lines; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file '" + path + "'");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::string join(const std::vector<std::string> &items) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); k++) {
        out += (k ? "," : "") + items[k];
    }
    return out;
}

std::vector<std::string> split_commas(const std::vector<std::string> &items) {
    std::vector<std::string> out;
    for (const auto &it : items) {
        std::stringstream ss(it);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!trim(part).empty()) {
                out.push_back(trim(part));
            }
        }
    }
    return out;
}

/// "1..5", "1,2,4" or a mix.
std::vector<unsigned> parse_lengths(const std::vector<std::string> &items) {
    std::vector<unsigned> out;
    for (const auto &part : split_commas(items)) {
        auto dots = part.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(static_cast<unsigned>(std::stoul(part)));
            } else {
                auto a = std::stoul(part.substr(0, dots));
                auto b = std::stoul(part.substr(dots + 2));
                if (b < a) {
                    throw UsageError("empty range '" + part + "'");
                }
                for (auto x = a; x <= b; x++) {
                    out.push_back(static_cast<unsigned>(x));
                }
            }
        } catch (const std::logic_error &) {
            throw UsageError("bad length list entry '" + part + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("empty length list");
    }
    return out;
}

std::vector<double> parse_reals(const std::vector<std::string> &items) {
    std::vector<double> out;
    for (const auto &part : split_commas(items)) {
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(part, &used);
        } catch (const std::logic_error &) {
        }
        if (used != part.size() || used == 0) {
            throw UsageError("bad number '" + part + "'");
        }
        out.push_back(x);
    }
    return out;
}

std::string distance_text(std::uint64_t d) {
    if (d == SSDEC_DISTANCE_UNKNOWN) {
        return "unknown";
    }
    if (d == SSDEC_DISTANCE_INFINITE) {
        return "inf";
    }
    return std::to_string(d);
}

struct CodeInfoArgs {
    std::vector<std::string> toric;
    std::string hgp4d;
    std::vector<std::string> hgp2d;
    std::string code;
    unsigned L = 0;
    std::string export_dir;
    bool brute_force = false;
};

int cmd_code_info(const CodeInfoArgs &a) {
    int sources = !a.toric.empty() + !a.hgp4d.empty() + !a.hgp2d.empty() + !a.code.empty();
    if (sources != 1) {
        throw UsageError("code-info needs exactly one of --toric, --hgp4d, --hgp2d, --code");
    }
    ssdec_code *code = nullptr;
    ssdec_status st;
    if (!a.toric.empty()) {
        std::map<std::string, unsigned> kv;
        for (const auto &item : a.toric) {
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw UsageError("--toric expects D=<dim> i=<degree> L=<size>, got '" + item + "'");
            }
            auto key = item.substr(0, eq);
            if (key != "D" && key != "i" && key != "L") {
                throw UsageError("--toric: unknown key '" + key + "'");
            }
            try {
                std::size_t used = 0;
                kv[key] = static_cast<unsigned>(std::stoul(item.substr(eq + 1), &used));
                if (used != item.size() - eq - 1) {
                    throw std::invalid_argument("");
                }
            } catch (const std::logic_error &) {
                throw UsageError("--toric: bad value in '" + item + "'");
            }
        }
        if (kv.size() != 3) {
            throw UsageError("--toric needs D, i and L");
        }
        st = ssdec_code_toric(kv["D"], kv["i"], kv["L"], &code);
    } else if (!a.hgp4d.empty()) {
        st = ssdec_code_hgp4d(a.hgp4d.c_str(), &code);
    } else if (!a.hgp2d.empty()) {
        st = ssdec_code_hgp2d(a.hgp2d[0].c_str(), a.hgp2d[1].c_str(), &code);
    } else {
        st = ssdec_code_from_spec(a.code.c_str(), a.L, &code);
    }
    if (st != SSDEC_OK) {
        return report(st);
    }
    std::unique_ptr<ssdec_code, void (*)(ssdec_code *)> guard(code, ssdec_code_free);

    ssdec_code_params p;
    if (auto rc = report(ssdec_code_get_params(code, &p))) {
        return rc;
    }
    std::size_t need = 0;
    ssdec_code_name(code, nullptr, 0, &need);
    std::string name(need + 1, '\0');
    ssdec_code_name(code, name.data(), name.size(), &need);
    name.resize(need);

    std::cout << "name: " << name << '\n';
    std::cout << "n=" << p.n << " k=" << p.k;
    if (p.dz == p.dx) {
        std::cout << " d=" << distance_text(p.dz);
    }
    std::cout << '\n';
    std::cout << "dz: " << distance_text(p.dz) << '\n';
    std::cout << "dx: " << distance_text(p.dx) << '\n';
    std::cout << "x_checks: " << p.x_checks << " (max row weight " << p.hx_row_weight << ", max column weight "
              << p.hx_col_weight << ")\n";
    std::cout << "z_checks: " << p.z_checks << " (max row weight " << p.hz_row_weight << ", max column weight "
              << p.hz_col_weight << ")\n";
    std::cout << "x_metachecks: " << (p.has_x_metachecks ? std::to_string(p.x_metachecks) : "none") << '\n';
    std::cout << "z_metachecks: " << (p.has_z_metachecks ? std::to_string(p.z_metachecks) : "none") << '\n';
    if (a.brute_force) {
        for (auto side : {SSDEC_SIDE_Z, SSDEC_SIDE_X}) {
            std::uint64_t d = 0;
            if (auto rc = report(ssdec_code_brute_force_distance(code, side, &d))) {
                return rc;
            }
            std::cout << (side == SSDEC_SIDE_Z ? "dz" : "dx") << " (brute force): " << distance_text(d) << '\n';
        }
    }

    int all_ok = 0;
    ssdec_code_invariant_report(code, nullptr, 0, &need, &all_ok);
    std::string text(need + 1, '\0');
    ssdec_code_invariant_report(code, text.data(), text.size(), &need, &all_ok);
    text.resize(need);
    std::cout << "invariants:\n";
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        std::cout << "  " << line << '\n';
    }
    if (!a.export_dir.empty()) {
        if (auto rc = report(ssdec_code_export(code, a.export_dir.c_str()))) {
            return rc;
        }
        std::cout << "exported to " << a.export_dir << '\n';
    }
    return all_ok ? 0 : kExitRuntime;
}

struct SimulateArgs {
    std::string config;
    std::string code;
    std::vector<std::string> L;
    std::vector<std::string> p;
    std::string p_meas;
    std::vector<std::string> rounds;
    std::string trials;
    std::string seed;
    std::string workers;
    std::string osd;
    std::string bp;
    std::string max_iters;
    std::string side;
    bool no_metachecks = false;
    bool two_stage = false;
    std::string out;
    bool quiet = false;
};

struct Echo {
    bool quiet = false;
    bool header = false;
};

void print_row(const char *line, void *user) {
    auto *echo = static_cast<Echo *>(user);
    if (echo->quiet) {
        return;
    }
    if (echo->header) {
        std::cout << "code_name,D,i,L,side,p_data,p_meas,n_rounds,trials,failures,bp_variant,max_iters,"
                     "osd_strategy,osd_param,metachecks,decoder_stage,master_seed\n";
        echo->header = false;
    }
    std::cout << line << '\n' << std::flush;
}

int cmd_simulate(const SimulateArgs &a) {
    ssdec_sim_config *cfg = nullptr;
    if (auto rc = report(ssdec_sim_config_new(&cfg))) {
        return rc;
    }
    std::unique_ptr<ssdec_sim_config, void (*)(ssdec_sim_config *)> guard(cfg, ssdec_sim_config_free);
    auto set = [&](const std::string &key, const std::string &value) {
        auto st = ssdec_sim_config_set(cfg, key.c_str(), value.c_str());
        if (st != SSDEC_OK) {
            throw UsageError(ssdec_last_error());
        }
    };
    std::string out = a.out;
    if (!a.config.empty()) {
        for (const auto &[key, value] : read_config(a.config)) {
            if (key == "out") {
                out = a.out.empty() ? value : a.out;
            } else {
                set(key, value);
            }
        }
    }
    // Flags override the config file.
    if (!a.code.empty()) set("code", a.code);
    if (!a.L.empty()) set("L", join(a.L));
    if (!a.p.empty()) set("p", join(a.p));
    if (!a.p_meas.empty()) set("p_meas", a.p_meas);
    if (!a.rounds.empty()) set("rounds", join(a.rounds));
    if (!a.trials.empty()) set("trials", a.trials);
    if (!a.seed.empty()) set("seed", a.seed);
    if (!a.workers.empty()) set("workers", a.workers);
    if (!a.osd.empty()) set("osd", a.osd);
    if (!a.bp.empty()) set("bp", a.bp);
    if (!a.max_iters.empty()) set("max_iters", a.max_iters);
    if (!a.side.empty()) set("side", a.side);
    if (a.no_metachecks) set("metachecks", "off");
    if (a.two_stage) set("two_stage", "1");

    Echo echo{a.quiet, out.empty()};
    return report(ssdec_simulate(cfg, out.empty() ? nullptr : out.c_str(), print_row, &echo));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Single-shot decoding of CSS quantum LDPC codes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ssdec_version()));

    CodeInfoArgs info;
    auto *ci = app.add_subcommand("code-info", "Construct a code and print its parameters and invariant checks");
    ci->add_option("--toric", info.toric, "D-dimensional toric code: D=<dim> i=<degree> L=<size>")->expected(3);
    ci->add_option("--hgp4d", info.hgp4d, "4D hypergraph product of a classical check matrix file");
    ci->add_option("--hgp2d", info.hgp2d, "2D hypergraph product of two check matrix files")->expected(2);
    ci->add_option("--code", info.code, "Code spec: toric:D=<dim>,i=<degree>, toric2d, toric3d, toric4d, hgp4d:FILE");
    ci->add_option("--L", info.L, "Lattice size for --code");
    ci->add_option("--export", info.export_dir, "Write hx, hz, mx, mz, lz, lx and meta.json into this directory");
    ci->add_flag("--brute-force", info.brute_force, "Also compute distances by exhaustive search (small codes)");

    SimulateArgs sim;
    auto *sc = app.add_subcommand("simulate", "Monte Carlo logical failure rates under phenomenological noise");
    sc->add_option("--config", sim.config, "Flat key = value config file; flags override it");
    sc->add_option("--code", sim.code, "Code spec: toric:D=<dim>,i=<degree>, toric2d, toric3d, toric4d, hgp4d:FILE, "
                                       "hgp2d:A,B (default toric3d)");
    sc->add_option("--L", sim.L, "Lattice sizes (list)");
    sc->add_option("--p", sim.p, "Data error rates: list or start:stop:step");
    sc->add_option("--p-meas", sim.p_meas, "Measurement error rate (default: equal to p)");
    sc->add_option("--rounds", sim.rounds, "Noisy rounds N before the perfect round (list, default 1; 0 means code capacity)");
    sc->add_option("--trials", sim.trials, "Trials per grid point (default 100)");
    sc->add_option("--seed", sim.seed, "Master seed (default 1)");
    sc->add_option("--workers", sim.workers, "Worker threads (default: available cores)");
    sc->add_option("--osd", sim.osd, "OSD strategy: none, 0, exhaustive:w, sweep:lambda (default exhaustive:10)");
    sc->add_option("--bp", sim.bp, "BP variant: tanh, jacobian, minsum:alpha (default jacobian)");
    sc->add_option("--max-iters", sim.max_iters, "BP iteration cap (default 30)");
    sc->add_option("--side", sim.side, "Error type to correct: Z or X (default Z)");
    sc->add_flag("--no-metachecks", sim.no_metachecks, "Decode on [H | I] even if the code has metachecks");
    sc->add_flag("--two-stage", sim.two_stage, "Two-stage decoding: repair the syndrome over the metacode first");
    sc->add_option("--out", sim.out, "Append rows to this CSV; rows already present are skipped");
    sc->add_flag("--quiet", sim.quiet, "Do not echo rows to stdout");

    std::string an_in, an_out;
    std::size_t bootstrap = 200;
    auto *ac = app.add_subcommand("analyze", "Threshold crossings, sustainable threshold and fits from a campaign CSV");
    ac->add_option("--in,input", an_in, "Campaign CSV")->required();
    ac->add_option("--out", an_out, "JSON output (default stdout)");
    ac->add_option("--bootstrap", bootstrap, "Bootstrap resamples for crossing intervals (default 200)");

    auto *ec = app.add_subcommand("experiment", "Diagnostic experiments");
    ec->require_subcommand(1);

    unsigned loc_L = 15, loc_iters = 100;
    double loc_p = 0.05;
    std::vector<std::string> loc_l{"1..5"};
    std::string loc_bp, loc_out;
    auto *bl = ec->add_subcommand("bp-locality", "BP marginals around a string error on the 2D toric code");
    bl->add_option("--L", loc_L, "Lattice size (default 15)");
    bl->add_option("--p", loc_p, "Prior error rate (default 0.05)");
    bl->add_option("--max-iters", loc_iters, "BP iterations (default 100)");
    bl->add_option("--l", loc_l, "String lengths, e.g. 1..5 or 1,3,5 (default 1..5)");
    bl->add_option("--bp", loc_bp, "BP variant (default jacobian)");
    bl->add_option("--out", loc_out, "CSV output (default stdout)");

    double uf_min = 0, uf_max = 20, uf_step = 0.5;
    bool uf_raw = false;
    std::string uf_out;
    auto *uf = ec->add_subcommand("underflow", "Round-trip error of atanh(tanh(x)) in double precision");
    uf->add_option("--x-min", uf_min, "Grid start (default 0)");
    uf->add_option("--x-max", uf_max, "Grid end (default 20)");
    uf->add_option("--step", uf_step, "Grid step (default 0.5)");
    uf->add_flag("--raw", uf_raw, "Single-point errors instead of window averages");
    uf->add_option("--out", uf_out, "CSV output (default stdout)");

    std::vector<std::string> hc_L{"4"}, hc_p{"0.01"};
    std::size_t hc_trials = 1000;
    std::uint64_t hc_seed = 1;
    unsigned hc_iters = 30;
    std::string hc_out;
    auto *hc = ec->add_subcommand("half-cube-census", "BP convergence with and without isolated half-cubes (3D toric)");
    hc->add_option("--L", hc_L, "Lattice sizes (default 4)");
    hc->add_option("--p", hc_p, "Error rates (default 0.01)");
    hc->add_option("--trials", hc_trials, "Trials per (L, p) (default 1000)");
    hc->add_option("--seed", hc_seed, "Master seed (default 1)");
    hc->add_option("--max-iters", hc_iters, "BP iterations (default 30)");
    hc->add_option("--out", hc_out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*ci) {
            return cmd_code_info(info);
        }
        if (*sc) {
            return cmd_simulate(sim);
        }
        if (*ac) {
            return report(ssdec_analyze(an_in.c_str(), an_out.empty() ? nullptr : an_out.c_str(), bootstrap));
        }
        if (*bl) {
            auto ls = parse_lengths(loc_l);
            return report(ssdec_experiment_bp_locality(loc_L, loc_p, loc_iters, ls.data(), ls.size(),
                                                       loc_bp.empty() ? nullptr : loc_bp.c_str(),
                                                       loc_out.empty() ? nullptr : loc_out.c_str()));
        }
        if (*uf) {
            return report(ssdec_experiment_underflow(uf_min, uf_max, uf_step, !uf_raw,
                                                     uf_out.empty() ? nullptr : uf_out.c_str()));
        }
        if (*hc) {
            std::vector<unsigned> Ls = parse_lengths(hc_L);
            auto ps = parse_reals(hc_p);
            return report(ssdec_experiment_half_cube_census(Ls.data(), Ls.size(), ps.data(), ps.size(), hc_trials,
                                                            hc_seed, hc_iters,
                                                            hc_out.empty() ? nullptr : hc_out.c_str()));
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
