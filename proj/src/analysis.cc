#include "ssdec/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <tuple>

namespace ssdec {

RateEstimate wilson_interval(std::size_t failures, std::size_t trials, double z) {
    if (trials == 0 || failures > trials) {
        throw std::invalid_argument("wilson_interval: need 0 <= failures <= trials and trials >= 1");
    }
    const double n = static_cast<double>(trials);
    const double phat = failures / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    RateEstimate r;
    r.rate = phat;
    r.low = failures == 0 ? 0.0 : std::max(0.0, center - half);
    r.high = failures == trials ? 1.0 : std::min(1.0, center + half);
    r.trials = trials;
    r.failures = failures;
    return r;
}

bool intervals_separated(const RateEstimate &a, const RateEstimate &b) {
    return a.high < b.low || b.high < a.low;
}

namespace {

double floored_rate(std::size_t failures, std::size_t trials) {
    if (failures == 0) {
        return 0.5 / static_cast<double>(trials);
    }
    return static_cast<double>(failures) / static_cast<double>(trials);
}

struct Node {
    double p;
    double f;
};

std::vector<Node> difference_nodes(const RateCurve &small, const RateCurve &large) {
    std::map<double, std::pair<std::size_t, std::size_t>> a, b;
    for (const auto &pt : small.points) {
        auto &e = a[pt.p];
        e.first += pt.failures;
        e.second += pt.trials;
    }
    for (const auto &pt : large.points) {
        auto &e = b[pt.p];
        e.first += pt.failures;
        e.second += pt.trials;
    }
    std::vector<Node> nodes;
    for (const auto &[p, fa] : a) {
        auto it = b.find(p);
        if (it == b.end() || fa.second == 0 || it->second.second == 0 || p <= 0) {
            continue;
        }
        double ra = floored_rate(fa.first, fa.second);
        double rb = floored_rate(it->second.first, it->second.second);
        nodes.push_back({p, std::log(rb) - std::log(ra)});
    }
    return nodes;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * (v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

std::vector<RateCurve> normalized(std::span<const RateCurve> curves) {
    std::vector<RateCurve> out(curves.begin(), curves.end());
    std::sort(out.begin(), out.end(), [](const RateCurve &a, const RateCurve &b) { return a.L < b.L; });
    for (auto &c : out) {
        std::sort(c.points.begin(), c.points.end(), [](const RatePoint &a, const RatePoint &b) {
            return std::tie(a.p, a.failures, a.trials) < std::tie(b.p, b.failures, b.trials);
        });
    }
    return out;
}

std::vector<double> crossings_of(const std::vector<RateCurve> &curves) {
    std::vector<double> out;
    for (std::size_t c = 0; c + 1 < curves.size(); c++) {
        auto x = pair_crossing(curves[c], curves[c + 1]);
        out.push_back(x ? *x : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

}  // namespace

std::optional<double> pair_crossing(const RateCurve &small, const RateCurve &large) {
    auto nodes = difference_nodes(small, large);
    for (std::size_t k = 0; k + 1 < nodes.size(); k++) {
        double a = nodes[k].f, b = nodes[k + 1].f;
        if (k == 0 && a == 0 && b > 0) {
            return nodes[0].p;
        }
        if (a < 0 && b == 0) {
            bool overtakes = std::any_of(nodes.begin() + k + 2, nodes.end(), [](const auto &nd) { return nd.f > 0; });
            if (overtakes) {
                return nodes[k + 1].p;
            }
            continue;
        }
        if (a < 0 && b > 0) {
            double t = a / (a - b);
            double lp = std::log(nodes[k].p) + t * (std::log(nodes[k + 1].p) - std::log(nodes[k].p));
            return std::exp(lp);
        }
    }
    return std::nullopt;
}

ThresholdEstimate crossing_estimate(std::span<const RateCurve> input, std::size_t N, std::size_t bootstrap,
                                    std::uint64_t seed) {
    if (input.size() < 2) {
        throw std::invalid_argument("crossing_estimate needs at least two lattice sizes");
    }
    auto curves = normalized(input);
    ThresholdEstimate est;
    est.N = N;
    for (std::size_t c = 0; c + 1 < curves.size(); c++) {
        est.pairs.emplace_back(curves[c].L, curves[c + 1].L);
    }
    est.pair_crossings = crossings_of(curves);
    std::vector<double> found;
    for (auto x : est.pair_crossings) {
        if (!std::isnan(x)) {
            found.push_back(x);
        }
    }
    if (found.empty()) {
        // Classify the first pair: below threshold everywhere, above everywhere, or merging.
        auto nodes = difference_nodes(curves[0], curves[1]);
        bool all_neg = !nodes.empty(), all_pos = !nodes.empty();
        for (const auto &nd : nodes) {
            all_neg = all_neg && nd.f <= 0;
            all_pos = all_pos && nd.f > 0;
        }
        if (all_pos) {
            est.note = "no crossing: larger L is worse at every p (above threshold or no threshold)";
            return est;
        }
        // Largest p at which every adjacent pair is CI-separated with larger L better.
        std::optional<double> bound;
        for (const auto &pt : curves[0].points) {
            bool separated_everywhere = true;
            for (std::size_t c = 0; c + 1 < curves.size() && separated_everywhere; c++) {
                auto it = std::find_if(curves[c + 1].points.begin(), curves[c + 1].points.end(),
                                       [&](const RatePoint &q) { return q.p == pt.p; });
                auto jt = std::find_if(curves[c].points.begin(), curves[c].points.end(),
                                       [&](const RatePoint &q) { return q.p == pt.p; });
                if (it == curves[c + 1].points.end() || jt == curves[c].points.end()) {
                    separated_everywhere = false;
                    break;
                }
                auto small = wilson_interval(jt->failures, jt->trials);
                auto large = wilson_interval(it->failures, it->trials);
                separated_everywhere = large.high < small.low;
            }
            if (separated_everywhere) {
                bound = pt.p;
            }
        }
        if (all_neg && bound && *bound < curves[0].points.back().p) {
            est.lower_bound = true;
            est.p_th = est.low = est.high = *bound;
            est.note = "no crossing: curves merge within intervals above p_th; p_th is a lower bound";
        } else if (all_neg) {
            est.note = "no crossing: larger L is better at every p (below threshold everywhere)";
        } else {
            est.note = "no crossing";
        }
        return est;
    }
    est.found = true;
    est.p_th = median(found);
    est.low = est.high = est.p_th;
    if (bootstrap > 0) {
        std::mt19937_64 rng(seed);
        std::vector<double> samples;
        for (std::size_t b = 0; b < bootstrap; b++) {
            auto resampled = curves;
            for (auto &c : resampled) {
                for (auto &pt : c.points) {
                    std::binomial_distribution<std::size_t> dist(pt.trials,
                                                                 static_cast<double>(pt.failures) / pt.trials);
                    pt.failures = dist(rng);
                }
            }
            std::vector<double> xs;
            for (auto x : crossings_of(resampled)) {
                if (!std::isnan(x)) {
                    xs.push_back(x);
                }
            }
            if (!xs.empty()) {
                samples.push_back(median(xs));
            }
        }
        if (!samples.empty()) {
            est.low = std::min(est.p_th, percentile(samples, 0.025));
            est.high = std::max(est.p_th, percentile(samples, 0.975));
        }
    }
    return est;
}

namespace {

bool overlapping(const ThresholdEstimate &a, const ThresholdEstimate &b) {
    return a.found && b.found && a.low <= b.high && b.low <= a.high;
}

void finish(SustainableResult &res, bool converged) {
    res.converged = converged;
    res.partial = !converged;
    for (auto it = res.sequence.rbegin(); it != res.sequence.rend(); ++it) {
        if (it->found) {
            res.p_sus = it->p_th;
            break;
        }
    }
    res.note = converged ? "successive threshold estimates agree within their intervals"
                         : "budget exhausted before successive estimates agreed; partial sequence";
}

}  // namespace

SustainableResult sustainable_threshold(const std::function<ThresholdEstimate(std::size_t)> &estimate_at,
                                        std::size_t first_n, std::size_t max_steps) {
    SustainableResult res;
    std::size_t N = std::max<std::size_t>(first_n, 1);
    for (std::size_t step = 0; step < max_steps; step++, N *= 2) {
        auto est = estimate_at(N);
        est.N = N;
        res.sequence.push_back(est);
        if (res.sequence.size() >= 2 && overlapping(res.sequence[res.sequence.size() - 2], est)) {
            finish(res, true);
            return res;
        }
    }
    finish(res, false);
    return res;
}

SustainableResult sustainable_from_sequence(const std::vector<ThresholdEstimate> &sequence) {
    std::size_t k = 0;
    return sustainable_threshold([&](std::size_t) { return sequence.at(k++); }, 1, sequence.size());
}

double half_cube_model(double p, double L, double alpha, std::size_t r, std::size_t q_max) {
    if (p <= 0 || alpha == 0) {
        return 0.0;
    }
    if (p >= 1) {
        return 0.0;
    }
    double sum = 0;
    const double lp = std::log(p), lq = std::log1p(-p);
    for (std::size_t q = 0; q <= q_max && q <= r; q++) {
        double lc = std::lgamma(r + 1.0) - std::lgamma(q + 1.0) - std::lgamma(r - q + 1.0);
        sum += std::exp(lc + (q + 3.0) * lp + (static_cast<double>(r) - q + 3.0) * lq);
    }
    return 20.0 * alpha * L * L * L * sum;
}

HalfCubeFit fit_half_cube(std::span<const HalfCubeSample> data) {
    std::vector<HalfCubeSample> pts;
    for (const auto &d : data) {
        if (d.rate > 0 && d.p > 0 && d.p < 1 && d.L > 0) {
            pts.push_back(d);
        }
    }
    std::vector<double> distinct_p;
    for (const auto &d : pts) {
        if (std::find(distinct_p.begin(), distinct_p.end(), d.p) == distinct_p.end()) {
            distinct_p.push_back(d.p);
        }
    }
    if (pts.size() < 6 || distinct_p.size() < 3) {
        throw std::invalid_argument("fit_half_cube: need at least 6 positive-rate points over 3 distinct p");
    }
    HalfCubeFit best;
    best.residual = std::numeric_limits<double>::infinity();
    std::vector<double> y(pts.size());
    for (std::size_t r = 50; r <= 500; r += 5) {
        for (std::size_t q = 0; q <= 8; q++) {
            double mean = 0;
            for (std::size_t t = 0; t < pts.size(); t++) {
                y[t] = std::log(pts[t].rate) - std::log(half_cube_model(pts[t].p, pts[t].L, 1.0, r, q));
                mean += y[t];
            }
            mean /= pts.size();
            double sse = 0;
            for (auto v : y) {
                sse += (v - mean) * (v - mean);
            }
            if (sse < best.residual) {
                best = {std::exp(mean), r, q, sse, pts.size()};
            }
        }
    }
    return best;
}

double ansatz_exponential(double N, double p_sus, double p0, double gamma) {
    return p_sus * (1.0 + (p0 / p_sus - 1.0) * std::exp(-gamma * N));
}

double ansatz_reciprocal(double N, double p_sus, double p0) {
    return p_sus * (1.0 + (p0 / p_sus - 1.0) / (N + 1.0));
}

namespace {

// Least squares for y = a (1 - w) + b w; returns {a, b, sse}.
std::array<double, 3> fit_linear_pair(std::span<const double> w, std::span<const double> y) {
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (std::size_t k = 0; k < w.size(); k++) {
        double u = 1 - w[k], v = w[k];
        s11 += u * u;
        s12 += u * v;
        s22 += v * v;
        t1 += u * y[k];
        t2 += v * y[k];
    }
    double det = s11 * s22 - s12 * s12;
    if (std::fabs(det) < 1e-300) {
        return {0, 0, std::numeric_limits<double>::infinity()};
    }
    double a = (t1 * s22 - t2 * s12) / det;
    double b = (s11 * t2 - s12 * t1) / det;
    double sse = 0;
    for (std::size_t k = 0; k < w.size(); k++) {
        double e = a * (1 - w[k]) + b * w[k] - y[k];
        sse += e * e;
    }
    return {a, b, sse};
}

}  // namespace

AnsatzFit fit_ansatz_reciprocal(std::span<const double> N, std::span<const double> pth) {
    if (N.size() != pth.size() || N.size() < 2) {
        throw std::invalid_argument("ansatz fit needs at least two (N, p_th) points");
    }
    std::vector<double> w;
    for (auto n : N) {
        w.push_back(1.0 / (n + 1.0));
    }
    auto [a, b, sse] = fit_linear_pair(w, pth);
    return {"reciprocal", a, b, 0.0, sse};
}

AnsatzFit fit_ansatz_exponential(std::span<const double> N, std::span<const double> pth) {
    if (N.size() != pth.size() || N.size() < 3) {
        throw std::invalid_argument("exponential ansatz fit needs at least three (N, p_th) points");
    }
    auto eval = [&](double gamma) {
        std::vector<double> w;
        for (auto n : N) {
            w.push_back(std::exp(-gamma * n));
        }
        auto r = fit_linear_pair(w, pth);
        return AnsatzFit{"exponential", r[0], r[1], gamma, r[2]};
    };
    AnsatzFit best;
    best.residual = std::numeric_limits<double>::infinity();
    const double lo = std::log(1e-4), hi = std::log(20.0);
    const int steps = 400;
    int best_k = 0;
    for (int k = 0; k <= steps; k++) {
        auto f = eval(std::exp(lo + (hi - lo) * k / steps));
        if (f.residual < best.residual) {
            best = f;
            best_k = k;
        }
    }
    // Golden-section refinement in log gamma around the best grid point.
    double a = lo + (hi - lo) * std::max(0, best_k - 1) / steps;
    double b = lo + (hi - lo) * std::min(steps, best_k + 1) / steps;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    auto fc = eval(std::exp(c)), fd = eval(std::exp(d));
    for (int it = 0; it < 100; it++) {
        if (fc.residual < fd.residual) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(std::exp(d));
        }
    }
    for (const auto &f : {fc, fd}) {
        if (f.residual < best.residual) {
            best = f;
        }
    }
    return best;
}

nlohmann::json to_json(const ThresholdEstimate &t) {
    nlohmann::json j;
    j["N"] = t.N;
    j["found"] = t.found;
    j["lower_bound"] = t.lower_bound;
    if (t.found || t.lower_bound) {
        j["p_th"] = t.p_th;
        j["ci_low"] = t.low;
        j["ci_high"] = t.high;
    } else {
        j["p_th"] = nullptr;
    }
    j["note"] = t.note;
    auto pairs = nlohmann::json::array();
    for (std::size_t k = 0; k < t.pairs.size(); k++) {
        nlohmann::json pj;
        pj["L_small"] = t.pairs[k].first;
        pj["L_large"] = t.pairs[k].second;
        double x = k < t.pair_crossings.size() ? t.pair_crossings[k] : std::numeric_limits<double>::quiet_NaN();
        pj["crossing"] = std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x);
        pairs.push_back(pj);
    }
    j["pairs"] = pairs;
    return j;
}

nlohmann::json analyze_campaign(const std::vector<CampaignRow> &rows, std::size_t bootstrap) {
    if (rows.empty()) {
        throw std::invalid_argument("analyze: no campaign rows");
    }
    struct Series {
        nlohmann::json meta;
        // N -> L -> p -> (failures, trials)
        std::map<std::size_t, std::map<std::size_t, std::map<double, std::pair<std::size_t, std::size_t>>>> data;
    };
    std::map<std::string, Series> series;
    for (const auto &r : rows) {
        std::string id = r.code_name + "|" + side_name(r.side) + "|" + r.bp_variant + "|" + std::to_string(r.max_iters) +
                         "|" + r.osd_strategy + ":" + std::to_string(r.osd_param) + "|" +
                         (r.metachecks ? "meta" : "nometa") + "|" + decoder_stage_name(r.decoder_stage) + "|" +
                         (r.p_meas == r.p_data ? "pm=p" : "pm=" + format_probability(r.p_meas));
        auto &s = series[id];
        if (s.meta.is_null()) {
            s.meta = {{"code_name", r.code_name},       {"side", side_name(r.side)},
                      {"bp_variant", r.bp_variant},     {"max_iters", r.max_iters},
                      {"osd_strategy", r.osd_strategy}, {"osd_param", r.osd_param},
                      {"metachecks", r.metachecks},     {"decoder_stage", decoder_stage_name(r.decoder_stage)},
                      {"D", r.D},                       {"i", r.i}};
        }
        auto &cell = s.data[r.n_rounds][r.L][r.p_data];
        cell.first += r.failures;
        cell.second += r.trials;
    }

    nlohmann::json out;
    out["threshold_estimates"] = nlohmann::json::array();
    out["psus_sequence"] = nlohmann::json::array();
    out["fits"] = nlohmann::json::object();
    out["rates"] = nlohmann::json::array();
    for (const auto &[id, s] : series) {
        std::vector<ThresholdEstimate> seq;
        for (const auto &[N, byL] : s.data) {
            std::vector<RateCurve> curves;
            for (const auto &[L, byP] : byL) {
                RateCurve c;
                c.L = L;
                for (const auto &[p, ft] : byP) {
                    c.points.push_back({p, ft.first, ft.second});
                    auto w = wilson_interval(ft.first, ft.second);
                    nlohmann::json rj = s.meta;
                    rj["N"] = N;
                    rj["L"] = L;
                    rj["p"] = p;
                    rj["failures"] = ft.first;
                    rj["trials"] = ft.second;
                    rj["rate"] = w.rate;
                    rj["ci_low"] = w.low;
                    rj["ci_high"] = w.high;
                    rj["rate_per_round"] = 1.0 - std::pow(1.0 - w.rate, 1.0 / (N + 1.0));
                    out["rates"].push_back(rj);
                }
                curves.push_back(std::move(c));
            }
            if (curves.size() < 2) {
                continue;
            }
            auto est = crossing_estimate(curves, N, bootstrap);
            auto ej = to_json(est);
            ej["series"] = s.meta;
            out["threshold_estimates"].push_back(ej);
            seq.push_back(est);
        }
        if (seq.empty()) {
            continue;
        }
        auto sus = sustainable_from_sequence(seq);
        nlohmann::json sj;
        sj["series"] = s.meta;
        sj["sequence"] = nlohmann::json::array();
        for (const auto &e : sus.sequence) {
            sj["sequence"].push_back(to_json(e));
        }
        sj["converged"] = sus.converged;
        sj["partial"] = sus.partial;
        bool any_found = std::any_of(seq.begin(), seq.end(), [](const ThresholdEstimate &e) { return e.found; });
        sj["p_sus"] = any_found ? nlohmann::json(sus.p_sus) : nlohmann::json(nullptr);
        sj["note"] = sus.note;
        out["psus_sequence"].push_back(sj);

        std::vector<double> ns, ps;
        for (const auto &e : seq) {
            if (e.found) {
                ns.push_back(static_cast<double>(e.N));
                ps.push_back(e.p_th);
            }
        }
        nlohmann::json fj;
        if (ns.size() >= 2) {
            auto rf = fit_ansatz_reciprocal(ns, ps);
            fj["reciprocal"] = {{"p_sus", rf.p_sus}, {"p0", rf.p0}, {"residual", rf.residual}};
        }
        if (ns.size() >= 3) {
            auto ef = fit_ansatz_exponential(ns, ps);
            fj["exponential"] = {{"p_sus", ef.p_sus}, {"p0", ef.p0}, {"gamma", ef.gamma}, {"residual", ef.residual}};
        }
        if (!fj.is_null()) {
            out["fits"][id] = fj;
        }
    }
    return out;
}

}  // namespace ssdec
