// One process per criterion: `acceptance <name>` prints a single [PASS]/[FAIL] line and exits 0/1.
// `acceptance all` runs every criterion in order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.h"
#include "ssdec/analysis.h"
#include "ssdec/bp_decoder.h"
#include "ssdec/chain_complex.h"
#include "ssdec/codes.h"
#include "ssdec/experiments.h"
#include "ssdec/gf2_linalg.h"
#include "ssdec/matrix_io.h"
#include "ssdec/noise_sim.h"
#include "ssdec/osd.h"

using namespace ssdec;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream details;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            details << "violated: " << what << "; ";
        }
    }
};

std::size_t workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt(const RateEstimate &r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu/%zu=%.3g [%.3g,%.3g]", r.failures, r.trials, r.rate, r.low, r.high);
    return buf;
}

RateEstimate measure(const CssCode &code, double p, std::size_t rounds, const DecoderSettings &settings,
                     std::size_t trials, std::uint64_t seed, std::uint64_t p_index) {
    auto recs = run_trials(code, Side::Z, NoiseModel{p, rounds == 0 ? 0.0 : p}, rounds, settings, trials, workers(),
                           seed, code.L, p_index);
    std::size_t failures = std::count_if(recs.begin(), recs.end(), [](const TrialRecord &r) { return r.failed; });
    return wilson_interval(failures, trials);
}

DecoderSettings bp_osd10(bool metachecks) {
    DecoderSettings s;
    s.osd = OsdConfig{OsdMethod::Exhaustive, 10, 60};
    s.metachecks = metachecks;
    return s;
}

bool strictly_decreasing(const std::vector<RateEstimate> &r) {
    for (std::size_t i = 1; i < r.size(); i++) {
        if (!(r[i].rate < r[i - 1].rate)) {
            return false;
        }
    }
    return true;
}

bool strictly_increasing(const std::vector<RateEstimate> &r) {
    for (std::size_t i = 1; i < r.size(); i++) {
        if (!(r[i].rate > r[i - 1].rate)) {
            return false;
        }
    }
    return true;
}

BitMatrix seed_matrix() {
    return read_matrix_file(std::string(SSDEC_TEST_DATA_DIR) + "/seed_10_6_3.txt");
}

std::vector<std::size_t> oracle_homology(const ChainComplex &c) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i <= c.length(); i++) {
        out.push_back(c.dim(i) - oracle::rank(c.boundary(i)) - oracle::rank(c.boundary(i + 1)));
    }
    return out;
}

bool complex_is_exact_zero(const ChainComplex &c) {
    for (std::size_t i = 1; i < c.length(); i++) {
        if (!matmul(c.boundary(i), c.boundary(i + 1)).is_zero()) {
            return false;
        }
    }
    return true;
}

Outcome algebraic_exactness() {
    Outcome o;
    std::size_t complexes = 0, codes = 0;
    std::vector<CssCode> built;
    for (std::size_t D = 2; D <= 4; D++) {
        for (std::size_t L = 2; L <= 4; L++) {
            std::vector<BitMatrix> factors(D, repetition_matrix(L));
            auto product = product_of_check_matrices(factors);
            o.require(complex_is_exact_zero(product.complex), "dd=0 toric D=" + std::to_string(D));
            complexes++;
            for (std::size_t i = 1; i < D; i++) {
                built.push_back(toric_code(D, i, L));
            }
        }
    }
    auto h = seed_matrix();
    {
        std::vector<BitMatrix> f{h, h, h.transpose(), h.transpose()};
        o.require(complex_is_exact_zero(product_of_check_matrices(f).complex), "dd=0 hgp4d");
        complexes++;
    }
    built.push_back(hgp_2d(h, h));
    built.push_back(hgp_4d(h));
    for (const auto &code : built) {
        for (const auto &check : check_invariants(code)) {
            o.require(check.ok, code.name + " " + check.name);
        }
        o.require(matmul(code.hx, code.hz.transpose()).is_zero(), code.name + " HxHz^T");
        if (code.mx) {
            o.require(matmul(*code.mx, code.hx).is_zero(), code.name + " MxHx");
        }
        if (code.mz) {
            o.require(matmul(*code.mz, code.hz).is_zero(), code.name + " MzHz");
        }
        o.require(rank(matmul(code.lx, code.lz.transpose())) == code.k, code.name + " logical pairing");
        codes++;
    }
    std::mt19937_64 rng(20241016);
    std::size_t pairs = 0;
    for (int t = 0; t < 50; t++) {
        auto make = [&] {
            std::size_t r = rng() % 13, c = 1 + rng() % 12;
            return ChainComplex::from_check_matrix(oracle::random_matrix(r, c, 0.3, rng));
        };
        auto b = make(), c = make();
        auto p = tensor(b, c);
        o.require(complex_is_exact_zero(p.complex), "dd=0 random product");
        auto rb = oracle_homology(b), rc = oracle_homology(c), rp = oracle_homology(p.complex);
        for (std::size_t i = 0; i <= p.complex.length(); i++) {
            o.require(rp[i] == kunneth_rank(rb, rc, i), "Kunneth random pair " + std::to_string(t));
            o.require(homology_rank(p.complex, i) == rp[i], "homology_rank random pair " + std::to_string(t));
        }
        pairs++;
    }
    o.details << complexes << " product complexes, " << codes << " codes, " << pairs << " random Kunneth pairs";
    return o;
}

Outcome parameter_reproduction() {
    Outcome o;
    std::size_t instances = 0, brute = 0;
    for (std::size_t D = 2; D <= 4; D++) {
        for (std::size_t i = 1; i < D; i++) {
            for (std::size_t L = 2; L <= 4; L++) {
                auto code = toric_code(D, i, L);
                auto binom = static_cast<std::size_t>(oracle::binomial(D, i));
                std::size_t LD = static_cast<std::size_t>(std::pow(L, D));
                Distance dz = static_cast<Distance>(std::pow(L, i)), dx = static_cast<Distance>(std::pow(L, D - i));
                o.require(code.n == binom * LD, code.name + " n");
                o.require(code.k == binom, code.name + " k");
                o.require(code.dz == dz, code.name + " dz");
                o.require(code.dx == dx, code.name + " dx");
                o.require(code.lz.rows() == binom && code.lx.rows() == binom, code.name + " logical count");
                if (code.n <= kBruteForceLimit) {
                    o.require(brute_force_distance(code, Side::Z) == dz, code.name + " brute dz");
                    o.require(brute_force_distance(code, Side::X) == dx, code.name + " brute dx");
                    brute++;
                }
                instances++;
            }
        }
    }
    auto hgp = hgp_4d(seed_matrix());
    o.require(hgp.n == 20625, "hgp4d n");
    o.require(hgp.k == 1441, "hgp4d k");
    o.details << instances << " toric instances, " << brute << " brute-forced; hgp4d n=" << hgp.n << " k=" << hgp.k;
    return o;
}

Outcome bp_numerics() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-20, 20);
    BpConfig tanh_cfg;
    tanh_cfg.variant = BpVariant::Tanh;
    BpConfig jac;
    BpConfig ms;
    ms.variant = BpVariant::MinSum;
    double worst_jac = 0, worst_xor = 0;
    for (int t = 0; t < 20000; t++) {
        std::size_t deg = 2 + rng() % 7;
        std::vector<double> in(deg), a(deg), b(deg);
        for (auto &x : in) {
            x = u(rng);
        }
        bool s = rng() & 1;
        check_update(tanh_cfg, s, in, a);
        check_update(jac, s, in, b);
        for (std::size_t i = 0; i < deg; i++) {
            worst_jac = std::max(worst_jac, std::abs(a[i] - b[i]));
        }
        double x = u(rng), y = u(rng);
        worst_xor = std::max(worst_xor, std::abs(llr_xor(x, y) - oracle::xor_llr_probability(x, y)));
    }
    o.require(worst_jac <= 1e-6, "jacobian vs tanh");
    o.require(worst_xor <= 1e-9, "llr_xor vs probability oracle");
    std::size_t bound_violations = 0;
    for (int t = 0; t < 10000; t++) {
        std::vector<double> in{u(rng), u(rng), u(rng)}, out(3);
        check_update(ms, false, in, out);
        for (std::size_t i = 0; i < 3; i++) {
            double m = std::min(std::abs(in[(i + 1) % 3]), std::abs(in[(i + 2) % 3]));
            bound_violations += std::abs(out[i]) > m + 1e-12;
        }
    }
    o.require(bound_violations == 0, "min-sum magnitude bound");
    double ratio = underflow_error_window(16.0) / underflow_error_window(14.0);
    o.require(ratio >= std::exp(4.0) / 2 && ratio <= 2 * std::exp(4.0), "underflow ratio");

    double worst_tree = 0;
    std::uniform_real_distribution<double> pu(0.02, 0.4);
    for (int t = 0; t < 100; t++) {
        std::size_t target = 4 + rng() % 13;
        std::vector<std::vector<Index>> rows;
        std::size_t vars = 1;
        while (vars < target) {
            std::size_t fresh = std::min<std::size_t>(1 + rng() % 2, target - vars);
            std::vector<Index> row{static_cast<Index>(rng() % vars)};
            for (std::size_t f = 0; f < fresh; f++) {
                row.push_back(static_cast<Index>(vars++));
            }
            std::sort(row.begin(), row.end());
            rows.push_back(row);
        }
        std::size_t m = rows.size();
        BitMatrix h(m, vars, std::move(rows));
        std::vector<double> p(vars), priors(vars);
        for (std::size_t i = 0; i < vars; i++) {
            p[i] = pu(rng);
            priors[i] = prior_llr(p[i]);
        }
        auto s = matvec(h, oracle::random_vector(vars, 0.3, rng));
        BpConfig cfg;
        cfg.early_stop = false;
        cfg.max_iters = 2 * vars + 2;
        auto r = bp_decode(h, s, priors, cfg);
        auto exact = oracle::exact_marginals(h, s, p);
        for (std::size_t i = 0; i < vars; i++) {
            worst_tree = std::max(worst_tree, std::abs(r.posteriors[i] - exact[i]));
        }
    }
    o.require(worst_tree <= 1e-9, "tree posteriors vs enumeration");
    o.details << "max|jac-tanh|=" << worst_jac << " max|xor-oracle|=" << worst_xor
              << " minsum violations=" << bound_violations << " underflow ratio=" << ratio
              << " max|tree-exact|=" << worst_tree;
    return o;
}

Outcome osd_oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-6, 6);
    std::size_t mismatches = 0, invalid = 0;
    for (int t = 0; t < 200; t++) {
        std::size_t n = 4 + rng() % 9, m = 2 + rng() % (n - 1);
        auto h = oracle::random_matrix(m, n, 0.35, rng);
        auto s = matvec(h, oracle::random_vector(n, 0.4, rng));
        std::vector<double> r(n);
        BitVector hard(n);
        for (std::size_t i = 0; i < n; i++) {
            r[i] = u(rng);
            if (r[i] <= 0) {
                hard.set(i);
            }
        }
        auto info = information_set(h, r);
        OsdConfig cfg{OsdMethod::Exhaustive, info.T.size(), 60};
        auto out = osd_decode(h, s, r, hard, cfg);
        invalid += matvec(h, out) != s;
        mismatches += static_cast<int>(out.weight()) != oracle::min_weight_solution(h, s);
    }
    o.require(invalid == 0, "valid corrections");
    o.require(mismatches == 0, "minimum weight");
    o.details << "200 random codes n<=12: weight mismatches=" << mismatches << " invalid=" << invalid;
    return o;
}

Outcome bp_only_pathology() {
    Outcome o;
    auto code = toric_code(3, 2, 8);
    DecoderSettings bp_only;
    bp_only.osd.method = OsdMethod::None;
    bp_only.metachecks = false;
    const std::vector<double> ps{0.005, 0.01, 0.02, 0.03};
    const std::size_t trials = 20000;
    std::map<double, RateEstimate> rates;
    for (std::size_t k = 0; k < ps.size(); k++) {
        rates[ps[k]] = measure(code, ps[k], 0, bp_only, trials, 2024, k);
    }
    o.require(rates[0.02].rate > rates[0.005].rate && intervals_separated(rates[0.02], rates[0.005]),
              "rate(0.02) > rate(0.005) with separated CIs");
    for (double p : {0.01, 0.02, 0.03}) {
        double model = half_cube_model(p, 8, 0.42, 245, 4);
        double ratio = rates[p].rate / model;
        o.require(ratio >= 0.5 && ratio <= 2.0, "model within factor 2 at p=" + std::to_string(p));
        o.details << "p=" << p << " " << fmt(rates[p]) << " model=" << model << "; ";
    }
    o.details << "p=0.005 " << fmt(rates[0.005]);
    return o;
}

Outcome single_shot_3d_scaling() {
    Outcome o;
    auto settings = bp_osd10(true);
    std::vector<RateEstimate> low, high;
    for (std::size_t L : {4, 6, 8}) {
        auto code = toric_code(3, 2, L);
        low.push_back(measure(code, 0.04, 4, settings, 3000, 3, 0));
        high.push_back(measure(code, 0.10, 4, settings, 400, 3, 1));
    }
    o.require(strictly_decreasing(low), "p=0.04 strictly decreasing in L");
    o.require(intervals_separated(low.front(), low.back()), "p=0.04 L=4 vs L=8 CI-separated");
    o.require(strictly_increasing(high), "p=0.10 strictly increasing in L");
    o.details << "p=0.04 L4 " << fmt(low[0]) << " L6 " << fmt(low[1]) << " L8 " << fmt(low[2]) << "; p=0.10 L4 "
              << fmt(high[0]) << " L6 " << fmt(high[1]) << " L8 " << fmt(high[2]);
    return o;
}

Outcome single_shot_4d_scaling() {
    Outcome o;
    auto settings = bp_osd10(true);
    const std::map<std::size_t, std::size_t> low_trials{{3, 20000}, {4, 10000}, {5, 20000}};
    std::vector<RateEstimate> low, high;
    for (std::size_t L : {3, 4, 5}) {
        auto code = toric_code(4, 2, L);
        low.push_back(measure(code, 0.025, 2, settings, low_trials.at(L), 4, 0));
        high.push_back(measure(code, 0.08, 2, settings, 1000, 4, 1));
    }
    o.require(strictly_decreasing(low), "p=0.025 strictly decreasing in L");
    o.require(intervals_separated(low.front(), low.back()), "p=0.025 L=3 vs L=5 CI-separated");
    o.require(strictly_increasing(high), "p=0.08 strictly increasing in L");
    o.details << "p=0.025 L3 " << fmt(low[0]) << " L4 " << fmt(low[1]) << " L5 " << fmt(low[2]) << "; p=0.08 L3 "
              << fmt(high[0]) << " L4 " << fmt(high[1]) << " L5 " << fmt(high[2]);
    return o;
}

Outcome single_vs_two_stage() {
    Outcome o;
    auto code = toric_code(3, 2, 6);
    auto single = bp_osd10(true);
    auto two = bp_osd10(true);
    two.stage = DecoderStage::TwoStage;
    auto rs = measure(code, 0.05, 4, single, 500, 8, 0);
    auto rt = measure(code, 0.05, 4, two, 500, 8, 0);
    bool ok = rs.rate <= rt.rate && (intervals_separated(rs, rt) || rs.rate < rt.rate);
    o.require(ok, "single-stage rate <= two-stage rate");
    o.details << "single " << fmt(rs) << " two-stage " << fmt(rt);
    return o;
}

Outcome bp_locality() {
    Outcome o;
    for (std::size_t l = 1; l <= 5; l++) {
        auto c = bp_locality_case(15, l, 0.05, 100);
        o.require(c.converged == (l <= 3), "convergence at l=" + std::to_string(l));
        o.require(c.defects.size() == 2, "two defects at l=" + std::to_string(l));
        if (l == 4) {
            o.require(path_dominates_parallel_neighbours(c), "on-path marginals exceed off-path at l=4");
        }
        o.details << "l=" << l << (c.converged ? " converged@" : " not converged@") << c.iterations << "; ";
    }
    return o;
}

Outcome determinism() {
    Outcome o;
    CampaignSpec spec;
    spec.code_name = "toric_D3_i2";
    spec.make_code = [](std::size_t L) { return toric_code(3, 2, L); };
    spec.L_values = {3, 4};
    spec.p_values = {0.02, 0.05};
    spec.rounds = {1, 2};
    spec.trials = 60;
    spec.master_seed = 77;
    auto csv_for = [&](std::size_t w, DecoderStage stage) {
        spec.workers = w;
        spec.settings.stage = stage;
        std::ostringstream out;
        write_csv(out, run_campaign(spec));
        return out.str();
    };
    std::size_t compared = 0;
    for (auto stage : {DecoderStage::SingleStage, DecoderStage::TwoStage}) {
        auto base = csv_for(1, stage);
        for (std::size_t w : {2, 4, 7}) {
            o.require(csv_for(w, stage) == base, std::string("identical CSV for workers=") + std::to_string(w));
            compared++;
        }
    }
    o.details << compared << " reruns compared byte-for-byte against workers=1";
    return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> &criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> list{
        {"algebraic_exactness", algebraic_exactness},
        {"parameter_reproduction", parameter_reproduction},
        {"bp_numerics", bp_numerics},
        {"osd_oracle_equivalence", osd_oracle_equivalence},
        {"bp_only_pathology", bp_only_pathology},
        {"single_shot_3d_scaling", single_shot_3d_scaling},
        {"single_shot_4d_scaling", single_shot_4d_scaling},
        {"single_vs_two_stage", single_vs_two_stage},
        {"bp_locality", bp_locality},
        {"determinism", determinism},
    };
    return list;
}

bool run_one(const std::string &name, const std::function<Outcome()> &fn) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception &e) {
        o.pass = false;
        o.details << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.details.str().c_str(), secs);
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion|all>\n");
        for (const auto &[name, fn] : criteria()) {
            std::fprintf(stderr, "  %s\n", name.c_str());
        }
        return 2;
    }
    std::string which = argv[1];
    bool all_pass = true, found = false;
    for (const auto &[name, fn] : criteria()) {
        if (which == "all" || which == name) {
            found = true;
            all_pass &= run_one(name, fn);
        }
    }
    if (!found) {
        std::fprintf(stderr, "unknown criterion: %s\n", which.c_str());
        return 2;
    }
    return all_pass ? 0 : 1;
}
