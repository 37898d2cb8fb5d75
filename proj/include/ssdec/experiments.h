#ifndef SSDEC_EXPERIMENTS_H
#define SSDEC_EXPERIMENTS_H

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "ssdec/bitmatrix.h"
#include "ssdec/bp_decoder.h"
#include "ssdec/codes.h"

namespace ssdec {

/// Edge of the 2D toric lattice. Vertical edge (x, y) joins vertices (x, y-1) and (x, y);
/// horizontal edge (x, y) joins (x-1, y) and (x, y), all coordinates mod L.
struct LatticeEdge {
    std::size_t x = 0;
    std::size_t y = 0;
    bool vertical = true;
};

/// Qubit index of an edge in toric_code(2, 1, L).
std::size_t toric2d_edge_index(std::size_t L, const LatticeEdge &e);
/// Check (vertex) index of (x, y) in toric_code(2, 1, L).
std::size_t toric2d_vertex_index(std::size_t L, std::size_t x, std::size_t y);
LatticeEdge toric2d_edge(std::size_t L, std::size_t index);

struct EdgeMarginal {
    LatticeEdge edge;
    double marginal = 0;
};

struct LocalityCase {
    std::size_t L = 0;
    std::size_t l = 0;
    double p = 0;
    std::size_t max_iters = 0;
    std::size_t x0 = 0;
    std::size_t y0 = 0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<std::size_t> defects;
    std::vector<EdgeMarginal> marginals;

    double marginal_at(const LatticeEdge &e) const;
};

/// A vertical string of l edges above vertex (x0, y0); BP only. Defaults centre the string.
LocalityCase bp_locality_case(std::size_t L, std::size_t l, double p, std::size_t max_iters,
                              BpVariant variant = BpVariant::Jacobian);
LocalityCase bp_locality_case_at(std::size_t L, std::size_t l, double p, std::size_t max_iters, std::size_t x0,
                                 std::size_t y0, BpVariant variant = BpVariant::Jacobian);

/// Every path edge compared with its parallel neighbours in columns x0 +- 1, which sit at the
/// same distance from the defect pair. True iff each path edge is strictly larger.
bool path_dominates_parallel_neighbours(const LocalityCase &c);

void write_locality_csv(std::ostream &out, const std::vector<LocalityCase> &cases);

struct UnderflowPoint {
    double x = 0;
    double error = 0;
    bool saturated = false;
};

/// |atanh(tanh(x)) - x| in double precision.
double underflow_error(double x);
/// Mean error over the non-saturated points among `samples` evenly spaced points in
/// [x - half_width, x + half_width].
double underflow_error_window(double x, double half_width = 0.5, std::size_t samples = 1001);
std::vector<UnderflowPoint> underflow_scan(const std::vector<double> &x_grid);
/// Same table with each error averaged over a window around x; saturated where tanh(x) rounds to 1.
std::vector<UnderflowPoint> underflow_scan_smoothed(const std::vector<double> &x_grid, double half_width = 0.5,
                                                    std::size_t samples = 1001);
void write_underflow_csv(std::ostream &out, const std::vector<UnderflowPoint> &points);

/// Faces of the 3D toric code qubit space, grouped per cube (rows of Hz).
struct HalfCubeCensus {
    std::size_t L = 0;
    double p = 0;
    std::size_t trials = 0;
    std::size_t with_half_cube_failed = 0;
    std::size_t with_half_cube_converged = 0;
    std::size_t without_half_cube_failed = 0;
    std::size_t without_half_cube_converged = 0;
};

/// Three faces of cube `cube` that pairwise share an edge (a corner configuration).
std::vector<std::size_t> corner_half_cube(const CssCode &code, std::size_t cube);

/// Whether the error contains three faces of a cube (the other three absent) with no other error
/// qubit within distance 2 in the qubit graph (qubits adjacent when they share an Hx row).
bool has_isolated_half_cube(const CssCode &code, const BitVector &error);

/// Code-capacity errors on toric_code(3, 2, L), BP only, classified by isolated half-cubes.
HalfCubeCensus half_cube_census(std::size_t L, double p, std::size_t trials, std::mt19937_64 &rng,
                                const BpConfig &bp = {});

void write_census_csv(std::ostream &out, const std::vector<HalfCubeCensus> &rows);

}  // namespace ssdec

#endif
