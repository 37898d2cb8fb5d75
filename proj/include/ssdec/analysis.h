#ifndef SSDEC_ANALYSIS_H
#define SSDEC_ANALYSIS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssdec/noise_sim.h"

namespace ssdec {

inline constexpr double kWilsonZ = 1.96;

struct RateEstimate {
    double rate = 0;
    double low = 0;
    double high = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
};

RateEstimate wilson_interval(std::size_t failures, std::size_t trials, double z = kWilsonZ);

/// Whether two 95% intervals are disjoint.
bool intervals_separated(const RateEstimate &a, const RateEstimate &b);

struct RatePoint {
    double p = 0;
    std::size_t failures = 0;
    std::size_t trials = 0;
};

struct RateCurve {
    std::size_t L = 0;
    std::vector<RatePoint> points;
};

struct ThresholdEstimate {
    bool found = false;
    double p_th = 0;
    double low = 0;
    double high = 0;
    std::size_t N = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    /// Per adjacent-L pair crossing; NaN where a pair does not cross.
    std::vector<double> pair_crossings;
    /// Set when no crossing exists but larger L is significantly better up to p_th, after which
    /// the curves merge within their intervals; p_th is then a lower bound.
    bool lower_bound = false;
    std::string note;
};

/// Log-rate piecewise-linear crossing between adjacent L curves; median over pairs and a
/// parametric bootstrap for the interval. Zero-failure points are floored at 0.5/trials.
ThresholdEstimate crossing_estimate(std::span<const RateCurve> curves, std::size_t N, std::size_t bootstrap = 200,
                                    std::uint64_t seed = 1);

/// Crossing of one pair of curves (small L first); nullopt if none.
std::optional<double> pair_crossing(const RateCurve &small, const RateCurve &large);

struct SustainableResult {
    std::vector<ThresholdEstimate> sequence;
    bool converged = false;
    bool partial = false;
    double p_sus = 0;
    std::string note;
};

/// Doubles N starting at `first_n` until two successive estimates have overlapping intervals or
/// `max_steps` estimates were made (then the result is flagged partial).
SustainableResult sustainable_threshold(const std::function<ThresholdEstimate(std::size_t)> &estimate_at,
                                        std::size_t first_n = 1, std::size_t max_steps = 10);

/// Same stopping rule applied to an already computed sequence (ordered by N).
SustainableResult sustainable_from_sequence(const std::vector<ThresholdEstimate> &sequence);

double half_cube_model(double p, double L, double alpha, std::size_t r, std::size_t q_max);

struct HalfCubeSample {
    double p = 0;
    double L = 0;
    double rate = 0;
};

struct HalfCubeFit {
    double alpha = 0;
    std::size_t r = 0;
    std::size_t q_max = 0;
    double residual = 0;
    std::size_t points = 0;
};

/// Least squares in log space over r in {50, 55, ..., 500} and q_max in {0..8}; alpha closed form.
HalfCubeFit fit_half_cube(std::span<const HalfCubeSample> data);

/// p_sus [1 + (p0/p_sus - 1) e^{-gamma N}].
double ansatz_exponential(double N, double p_sus, double p0, double gamma);
/// p_sus (1 + (p0/p_sus - 1)/(N + 1)).
double ansatz_reciprocal(double N, double p_sus, double p0);

struct AnsatzFit {
    std::string form;
    double p_sus = 0;
    double p0 = 0;
    double gamma = 0;
    double residual = 0;
};

AnsatzFit fit_ansatz_exponential(std::span<const double> N, std::span<const double> pth);
AnsatzFit fit_ansatz_reciprocal(std::span<const double> N, std::span<const double> pth);

/// Groups campaign rows into per-(config, N) curve sets and emits
/// {threshold_estimates, psus_sequence, fits}. Throws std::invalid_argument on empty input.
nlohmann::json analyze_campaign(const std::vector<CampaignRow> &rows, std::size_t bootstrap = 200);

nlohmann::json to_json(const ThresholdEstimate &t);

}  // namespace ssdec

#endif
