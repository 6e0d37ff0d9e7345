#include "mdiqkd/asymmetric.hpp"

#include <cmath>
#include <limits>

#include "mdiqkd/error.hpp"
#include "mdiqkd/numeric.hpp"

namespace mdiqkd {

std::vector<RigEstRow> rig_vs_est_scan(const std::vector<double>& l_bc_values, const std::vector<double>& l_ac_values,
                                       const SystemParams& params, const OptimizerConfig& cfg) {
    std::vector<RigEstRow> rows;
    for (double lbc : l_bc_values) {
        for (double lac : l_ac_values) {
            ChannelGeometry g = ChannelGeometry::from_lengths(lac, lbc, params.alpha_db_per_km);
            OptimizationResult rig = optimize_asymptotic(g, params, IntensityConstraint::Free, cfg);
            OptimizationResult est = optimize_r_est(g, params, IntensityConstraint::Free, cfg);
            RigEstRow r;
            r.l_ac_km = lac;
            r.l_bc_km = lbc;
            r.x = g.x();
            r.r_rig = rig.best_rate;
            r.mu_a_rig = rig.best_settings.alice.mu;
            r.mu_b_rig = rig.best_settings.bob.mu;
            r.r_est = est.best_rate;
            r.mu_a_est = est.best_settings.alice.mu;
            r.mu_b_est = est.best_settings.bob.mu;
            r.rel_diff = r.r_rig > 0.0 ? std::abs(r.r_rig - r.r_est) / r.r_rig
                                       : std::numeric_limits<double>::infinity();
            rows.push_back(r);
        }
    }
    return rows;
}

MismatchLimit max_tolerable_mismatch(double l_bc_km, const SystemParams& params, double l_ac_max_km, double km_tol,
                                     const OptimizerConfig& cfg) {
    auto positive = [&](double lac) {
        ChannelGeometry g = ChannelGeometry::from_lengths(lac, l_bc_km, params.alpha_db_per_km);
        return optimize_asymptotic(g, params, IntensityConstraint::Free, cfg).best_rate > 0.0;
    };
    double lo = l_bc_km, hi = l_ac_max_km;
    if (!positive(lo)) throw NumericalError("no positive rate even with matched channels");
    if (positive(hi)) {
        lo = hi;
    } else {
        while (hi - lo > km_tol) {
            double mid = 0.5 * (lo + hi);
            if (positive(mid))
                lo = mid;
            else
                hi = mid;
        }
    }
    MismatchLimit m;
    m.l_bc_km = l_bc_km;
    m.l_ac_km = lo;
    ChannelGeometry g = ChannelGeometry::from_lengths(lo, l_bc_km, params.alpha_db_per_km);
    m.x = g.x();
    return m;
}

std::vector<FixedXRow> fixed_x_scan(double x, const std::vector<double>& l_bc_values, RateMode mode,
                                    const SystemParams& params, const OptimizerConfig& cfg) {
    std::vector<FixedXRow> rows;
    for (double lbc : l_bc_values) {
        ChannelGeometry g = geometry_from_ratio(x, lbc, params.alpha_db_per_km);
        OptimizationResult r = optimize_rate(mode, g, params, IntensityConstraint::Free, cfg);
        FixedXRow row;
        row.l_bc_km = g.l_bc_km();
        row.l_ac_km = g.l_ac_km();
        row.rate = r.best_rate;
        row.intensities = r.best_settings;
        row.mu_ratio = r.best_settings.alice.mu / r.best_settings.bob.mu;
        if (mode == RateMode::TwoDecoyBounds) {
            row.nu_ratio = r.best_settings.alice.nu / r.best_settings.bob.nu;
        } else {
            row.r_est = optimize_r_est(g, params, IntensityConstraint::Free, cfg).best_rate;
        }
        rows.push_back(row);
    }
    return rows;
}

double log_rate_slope(const std::vector<FixedXRow>& rows, bool use_r_est) {
    std::vector<double> l, y;
    for (const auto& r : rows) {
        double v = use_r_est ? r.r_est : r.rate;
        if (v > 0.0) {
            l.push_back(r.l_bc_km);
            y.push_back(std::log10(v));
        }
    }
    return fit_line(l, y).slope;
}

}  // namespace mdiqkd
