#ifndef MDIQKD_OPTIMIZER_HPP
#define MDIQKD_OPTIMIZER_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mdiqkd/keyrate.hpp"
#include "mdiqkd/params.hpp"

namespace mdiqkd {

// Positive interval; the search runs on log(x).
struct VariableBounds {
    double lo = 0.0;
    double hi = 0.0;
};

struct SearchOptions {
    // Seeds per coordinate, reduced for higher dimensions so the grid never
    // exceeds max_starts points (but never below 3 per coordinate).
    int seeds_per_variable = 9;
    int max_starts = 81;
    double shrink = 0.5;
    double rel_step_tol = 1e-4;
    // Starts are first run to this coarser step; the best one is then refined
    // to rel_step_tol.
    double screen_step_tol = 1e-2;
    int max_evaluations = 20000;
};

struct SearchResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Objective returns -inf (or NaN) at infeasible points.
using Objective = std::function<double(const std::vector<double>&)>;

// Log-space compass search from every start. The first step is half the seed
// spacing; steps shrink by opts.shrink when no coordinate move improves. All
// starts stop at screen_step_tol, then the best continues to rel_step_tol. Equal values prefer the smaller coordinate sum, then the
// earlier start. Throws ValidationError if no start is feasible.
SearchResult maximize(const Objective& f, const std::vector<VariableBounds>& bounds,
                      const std::vector<std::vector<double>>& starts, const SearchOptions& opts = {});

// Starts on a log-spaced grid: k points per coordinate at the (j + 1/2) / k
// quantiles of each log interval, k from seeds_for_dimension.
SearchResult maximize(const Objective& f, const std::vector<VariableBounds>& bounds,
                      const SearchOptions& opts = {});

int seeds_for_dimension(const SearchOptions& opts, std::size_t n);

std::vector<std::vector<double>> log_seed_grid(const std::vector<VariableBounds>& bounds, int per_variable);

enum class IntensityConstraint {
    Free,            // every intensity independent
    PartySymmetric,  // mu_a = mu_b, nu_a = nu_b
    ArrivalMatched,  // mu_a t_a = mu_b t_b, nu_a t_a = nu_b t_b (the symmetric choice)
};

struct OptimizerConfig {
    VariableBounds mu{1e-4, 3.0};
    VariableBounds nu{1e-4, 1.0};
    double omega_floor = 5e-4;
    SearchOptions search{};
    AsymptoticOptions asymptotic{};
};

struct OptimizationResult {
    IntensitySettings best_settings{};
    double best_rate = 0.0;  // floored rate at best_settings
    double best_raw = 0.0;   // single-photon term minus EC term, may be negative
    int evaluations = 0;
    bool converged = false;
    std::vector<std::string> constraint_active;  // bound names hit at the optimum
    KeyRateReport report{};
};

// Maximizes the asymptotic rate over (mu_a, mu_b).
OptimizationResult optimize_asymptotic(const ChannelGeometry& geometry, const SystemParams& params,
                                       IntensityConstraint constraint, const OptimizerConfig& cfg = {});

// Maximizes the two-decoy rate over mu and nu with omega pinned to the floor.
OptimizationResult optimize_two_decoy(const ChannelGeometry& geometry, const SystemParams& params,
                                      IntensityConstraint constraint, const OptimizerConfig& cfg = {});

// Maximizes G(x, mu_a, mu_b), i.e. the estimated rate at any t_b.
OptimizationResult optimize_r_est(const ChannelGeometry& geometry, const SystemParams& params,
                                  IntensityConstraint constraint, const OptimizerConfig& cfg = {});

OptimizationResult optimize_rate(RateMode mode, const ChannelGeometry& geometry, const SystemParams& params,
                                 IntensityConstraint constraint, const OptimizerConfig& cfg = {});

struct SweepRow {
    double l_total_km = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double omega = 0.0;
    double rate = 0.0;
};

// Symmetric channels (L_ac = L_bc = L/2), party-symmetric intensities.
std::vector<SweepRow> optimal_intensity_sweep(RateMode mode, const std::vector<double>& total_km,
                                              const SystemParams& params, const OptimizerConfig& cfg = {});

// t_b from l_bc, t_a = x t_b.
ChannelGeometry geometry_from_ratio(double x, double l_bc_km, double alpha_db_per_km);

struct AsymmetricComparison {
    double x = 0.0;
    double l_bc_km = 0.0;
    double l_ac_km = 0.0;
    OptimizationResult symmetric_choice;
    OptimizationResult optimal_choice;
    double advantage = 0.0;       // optimal / symmetric - 1
    double arrival_ratio = 0.0;   // mu_a t_a / (mu_b t_b) at the optimal choice
};

AsymmetricComparison asymmetric_compare(double x, double l_bc_km, RateMode mode, const SystemParams& params,
                                        const OptimizerConfig& cfg = {});

struct ScalingPoint {
    double scale = 1.0;
    double mu_a = 0.0;
    double mu_b = 0.0;
    double rate = 0.0;
    double rate_ratio = 0.0;  // rate / base rate
};

struct ScalingReport {
    double x = 0.0;
    double base_mu_a = 0.0;
    double base_mu_b = 0.0;
    double base_rate = 0.0;
    std::vector<ScalingPoint> points;
    double max_argmax_shift = 0.0;        // max |mu - base mu| over points
    double max_scaling_rel_error = 0.0;   // max |ratio / scale^2 - 1|
    double log_slope_per_km = 0.0;        // d log10 r_est / d L_bc at fixed x
};

// Background counts are switched off (y0 = 0) before anything is computed.
// Base geometry is t_b = 1, t_a = x; each scale multiplies both.
ScalingReport scaling_check(double x, const std::vector<double>& scale_factors, const SystemParams& params,
                              const OptimizerConfig& cfg = {});

}  // namespace mdiqkd

#endif  // MDIQKD_OPTIMIZER_HPP
