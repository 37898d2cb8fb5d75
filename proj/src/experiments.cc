#include "ssdec/experiments.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ssdec/noise_sim.h"
#include "ssdec/single_shot.h"

namespace ssdec {

std::size_t toric2d_edge_index(std::size_t L, const LatticeEdge &e) {
    // Vertical: vertex x of the first factor (x) edge y of the second; horizontal: edge x (x) vertex y.
    return (e.vertical ? 0 : L * L) + (e.x % L) * L + (e.y % L);
}

std::size_t toric2d_vertex_index(std::size_t L, std::size_t x, std::size_t y) {
    return (x % L) * L + (y % L);
}

LatticeEdge toric2d_edge(std::size_t L, std::size_t index) {
    if (index >= 2 * L * L) {
        throw std::out_of_range("toric2d_edge: index out of range");
    }
    bool vertical = index < L * L;
    std::size_t r = vertical ? index : index - L * L;
    return {r / L, r % L, vertical};
}

double LocalityCase::marginal_at(const LatticeEdge &e) const {
    return marginals.at(toric2d_edge_index(L, e)).marginal;
}

LocalityCase bp_locality_case_at(std::size_t L, std::size_t l, double p, std::size_t max_iters, std::size_t x0,
                                 std::size_t y0, BpVariant variant) {
    if (l < 1 || l >= L) {
        throw std::invalid_argument("bp_locality_case: need 1 <= l < L");
    }
    auto code = toric_code(2, 1, L);
    BitVector error(code.n);
    for (std::size_t t = 1; t <= l; t++) {
        error.set(toric2d_edge_index(L, {x0, y0 + t, true}));
    }
    auto syndrome = matvec(code.hx, error);
    BpConfig cfg;
    cfg.variant = variant;
    cfg.max_iters = max_iters;
    auto res = bp_decode(code.hx, syndrome, uniform_priors(code.n, p), cfg);

    LocalityCase c;
    c.L = L;
    c.l = l;
    c.p = p;
    c.max_iters = max_iters;
    c.x0 = x0 % L;
    c.y0 = y0 % L;
    c.converged = res.converged;
    c.iterations = res.iterations;
    auto defects = syndrome.support();
    c.defects.assign(defects.begin(), defects.end());
    for (std::size_t q = 0; q < code.n; q++) {
        c.marginals.push_back({toric2d_edge(L, q), 1.0 / (1.0 + std::exp(res.posteriors[q]))});
    }
    return c;
}

LocalityCase bp_locality_case(std::size_t L, std::size_t l, double p, std::size_t max_iters, BpVariant variant) {
    return bp_locality_case_at(L, l, p, max_iters, L / 2, (L - l) / 2, variant);
}

bool path_dominates_parallel_neighbours(const LocalityCase &c) {
    for (std::size_t t = 1; t <= c.l; t++) {
        double on = c.marginal_at({c.x0, c.y0 + t, true});
        double left = c.marginal_at({c.x0 + c.L - 1, c.y0 + t, true});
        double right = c.marginal_at({c.x0 + 1, c.y0 + t, true});
        if (!(on > left && on > right)) {
            return false;
        }
    }
    return true;
}

void write_locality_csv(std::ostream &out, const std::vector<LocalityCase> &cases) {
    out << "record,L,l,p,max_iters,converged,iterations,edge_x,edge_y,orientation,marginal\n";
    for (const auto &c : cases) {
        for (const auto &m : c.marginals) {
            out << "edge," << c.L << ',' << c.l << ',' << c.p << ',' << c.max_iters << ',' << c.converged << ','
                << c.iterations << ',' << m.edge.x << ',' << m.edge.y << ',' << (m.edge.vertical ? 'V' : 'H') << ','
                << m.marginal << '\n';
        }
        for (auto d : c.defects) {
            out << "defect," << c.L << ',' << c.l << ',' << c.p << ',' << c.max_iters << ',' << c.converged << ','
                << c.iterations << ',' << d / c.L << ',' << d % c.L << ",,\n";
        }
        out << "summary," << c.L << ',' << c.l << ',' << c.p << ',' << c.max_iters << ',' << c.converged << ','
            << c.iterations << ",,,,\n";
    }
}

double underflow_error(double x) {
    return std::fabs(std::atanh(std::tanh(x)) - x);
}

double underflow_error_window(double x, double half_width, std::size_t samples) {
    if (samples < 2) {
        return underflow_error(x);
    }
    double sum = 0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < samples; k++) {
        double t = x - half_width + 2 * half_width * k / (samples - 1);
        double e = underflow_error(t);
        if (std::isfinite(e)) {
            sum += e;
            used++;
        }
    }
    return used ? sum / used : std::numeric_limits<double>::infinity();
}

std::vector<UnderflowPoint> underflow_scan(const std::vector<double> &x_grid) {
    std::vector<UnderflowPoint> out;
    for (auto x : x_grid) {
        double e = underflow_error(x);
        out.push_back({x, e, std::tanh(x) == 1.0 || !std::isfinite(e)});
    }
    return out;
}

std::vector<UnderflowPoint> underflow_scan_smoothed(const std::vector<double> &x_grid, double half_width,
                                                    std::size_t samples) {
    std::vector<UnderflowPoint> out;
    for (auto x : x_grid) {
        if (std::tanh(x) == 1.0) {
            out.push_back({x, std::numeric_limits<double>::infinity(), true});
            continue;
        }
        double e = underflow_error_window(x, half_width, samples);
        out.push_back({x, e, !std::isfinite(e)});
    }
    return out;
}

void write_underflow_csv(std::ostream &out, const std::vector<UnderflowPoint> &points) {
    out << "x,error,saturated\n";
    out.precision(17);
    for (const auto &p : points) {
        out << p.x << ',';
        if (std::isfinite(p.error)) {
            out << p.error;
        } else {
            out << "inf";
        }
        out << ',' << (p.saturated ? 1 : 0) << '\n';
    }
}

namespace {

bool share_check(const BitMatrix &hx, std::size_t a, std::size_t b) {
    auto ca = hx.col(a), cb = hx.col(b);
    std::size_t i = 0, j = 0;
    while (i < ca.size() && j < cb.size()) {
        if (ca[i] == cb[j]) {
            return true;
        }
        ca[i] < cb[j] ? i++ : j++;
    }
    return false;
}

}  // namespace

std::vector<std::size_t> corner_half_cube(const CssCode &code, std::size_t cube) {
    auto faces = code.hz.row(cube);
    for (std::size_t a = 0; a < faces.size(); a++) {
        for (std::size_t b = a + 1; b < faces.size(); b++) {
            if (!share_check(code.hx, faces[a], faces[b])) {
                continue;
            }
            for (std::size_t c = b + 1; c < faces.size(); c++) {
                if (share_check(code.hx, faces[a], faces[c]) && share_check(code.hx, faces[b], faces[c])) {
                    return {faces[a], faces[b], faces[c]};
                }
            }
        }
    }
    throw std::invalid_argument("corner_half_cube: no three mutually adjacent faces");
}

bool has_isolated_half_cube(const CssCode &code, const BitVector &error) {
    const auto &hx = code.hx;
    const auto &hz = code.hz;
    auto support = error.support();
    std::vector<char> seen_cube(hz.rows(), 0);
    std::vector<int> dist(code.n, -1);
    for (auto f : support) {
        for (auto cube : hz.col(f)) {
            if (seen_cube[cube]) {
                continue;
            }
            seen_cube[cube] = 1;
            std::vector<std::size_t> in_cube;
            for (auto g : hz.row(cube)) {
                if (error.get(g)) {
                    in_cube.push_back(g);
                }
            }
            if (in_cube.size() != 3) {
                continue;
            }
            // Breadth-first search to depth 2 from the three faces.
            std::vector<std::size_t> touched(in_cube.begin(), in_cube.end());
            std::vector<std::size_t> frontier(in_cube.begin(), in_cube.end());
            for (auto g : in_cube) {
                dist[g] = 0;
            }
            bool isolated = true;
            for (int depth = 1; depth <= 2 && isolated; depth++) {
                std::vector<std::size_t> next;
                for (auto q : frontier) {
                    for (auto chk : hx.col(q)) {
                        for (auto nb : hx.row(chk)) {
                            if (dist[nb] >= 0) {
                                continue;
                            }
                            dist[nb] = depth;
                            touched.push_back(nb);
                            next.push_back(nb);
                            if (error.get(nb)) {
                                isolated = false;
                            }
                        }
                    }
                }
                frontier = std::move(next);
            }
            for (auto q : touched) {
                dist[q] = -1;
            }
            if (isolated) {
                return true;
            }
        }
    }
    return false;
}

HalfCubeCensus half_cube_census(std::size_t L, double p, std::size_t trials, std::mt19937_64 &rng,
                                const BpConfig &bp) {
    auto code = toric_code(3, 2, L);
    BpDecoder dec(code.hx, bp);
    auto priors = uniform_priors(code.n, p);
    HalfCubeCensus out;
    out.L = L;
    out.p = p;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; t++) {
        auto e = bernoulli_vector(code.n, p, rng);
        auto res = dec.decode(matvec(code.hx, e), priors);
        bool half = has_isolated_half_cube(code, e);
        if (half) {
            (res.converged ? out.with_half_cube_converged : out.with_half_cube_failed)++;
        } else {
            (res.converged ? out.without_half_cube_converged : out.without_half_cube_failed)++;
        }
    }
    return out;
}

void write_census_csv(std::ostream &out, const std::vector<HalfCubeCensus> &rows) {
    out << "L,p,trials,with_half_cube_failed,with_half_cube_converged,without_half_cube_failed,without_half_cube_converged\n";
    for (const auto &r : rows) {
        out << r.L << ',' << r.p << ',' << r.trials << ',' << r.with_half_cube_failed << ','
            << r.with_half_cube_converged << ',' << r.without_half_cube_failed << ','
            << r.without_half_cube_converged << '\n';
    }
}

}  // namespace ssdec
