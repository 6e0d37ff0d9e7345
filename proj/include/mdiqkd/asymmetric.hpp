#ifndef MDIQKD_ASYMMETRIC_HPP
#define MDIQKD_ASYMMETRIC_HPP

#include <vector>

#include "mdiqkd/optimizer.hpp"

namespace mdiqkd {

struct RigEstRow {
    double l_ac_km = 0.0;
    double l_bc_km = 0.0;
    double x = 0.0;
    double r_rig = 0.0;
    double mu_a_rig = 0.0;
    double mu_b_rig = 0.0;
    double r_est = 0.0;
    double mu_a_est = 0.0;
    double mu_b_est = 0.0;
    double rel_diff = 0.0;  // |r_rig - r_est| / r_rig, inf when r_rig == 0
};

// Both rates at their own optimal (mu_a, mu_b) for every (L_bc, L_ac) pair.
std::vector<RigEstRow> rig_vs_est_scan(const std::vector<double>& l_bc_values, const std::vector<double>& l_ac_values,
                                       const SystemParams& params, const OptimizerConfig& cfg = {});

struct MismatchLimit {
    double l_bc_km = 0.0;
    double l_ac_km = 0.0;  // longest L_ac with a positive optimal asymptotic rate
    double x = 0.0;        // t_a / t_b there
};

// Bisection on L_ac in [l_bc, l_ac_max] to km_tol.
MismatchLimit max_tolerable_mismatch(double l_bc_km, const SystemParams& params, double l_ac_max_km = 300.0,
                                     double km_tol = 0.05, const OptimizerConfig& cfg = {});

struct FixedXRow {
    double l_bc_km = 0.0;
    double l_ac_km = 0.0;
    double rate = 0.0;
    double r_est = 0.0;  // asymptotic mode only
    IntensitySettings intensities{};
    double mu_ratio = 0.0;  // mu_a / mu_b
    double nu_ratio = 0.0;  // nu_a / nu_b, two-decoy mode only
};

std::vector<FixedXRow> fixed_x_scan(double x, const std::vector<double>& l_bc_values, RateMode mode,
                                    const SystemParams& params, const OptimizerConfig& cfg = {});

// Least-squares slope of log10(rate) against L_bc over rows with rate > 0.
// use_r_est selects the estimated-rate column.
double log_rate_slope(const std::vector<FixedXRow>& rows, bool use_r_est);

}  // namespace mdiqkd

#endif  // MDIQKD_ASYMMETRIC_HPP
