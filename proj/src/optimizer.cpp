#include "mdiqkd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdiqkd/analytic.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/numeric.hpp"

namespace mdiqkd {

namespace {

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

double coord_sum_exp(const std::vector<double>& u) {
    double s = 0.0;
    for (double v : u) s += std::exp(v);
    return s;
}

bool better(double v1, const std::vector<double>& u1, double v2, const std::vector<double>& u2) {
    if (v1 > v2) return true;
    if (v1 < v2) return false;
    return coord_sum_exp(u1) < coord_sum_exp(u2);
}

std::vector<double> exp_all(const std::vector<double>& u) {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = std::exp(u[i]);
    return x;
}

}  // namespace

std::vector<std::vector<double>> log_seed_grid(const std::vector<VariableBounds>& bounds, int per_variable) {
    if (per_variable < 1) throw ValidationError("seeds_per_variable must be >= 1");
    std::vector<std::vector<double>> axis(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        double a = std::log(bounds[i].lo), b = std::log(bounds[i].hi);
        for (int k = 0; k < per_variable; ++k)
            axis[i].push_back(std::exp(a + (b - a) * (k + 0.5) / per_variable));
    }
    std::vector<std::vector<double>> out{{}};
    for (const auto& ax : axis) {
        std::vector<std::vector<double>> next;
        for (const auto& prefix : out)
            for (double v : ax) {
                auto p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

SearchResult maximize(const Objective& f, const std::vector<VariableBounds>& bounds,
                      const std::vector<std::vector<double>>& starts, const SearchOptions& opts) {
    const std::size_t n = bounds.size();
    if (n == 0) throw ValidationError("maximize: no variables");
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(bounds[i].lo > 0.0 && bounds[i].lo <= bounds[i].hi))
            throw ValidationError("maximize: bounds must satisfy 0 < lo <= hi");
        lo[i] = std::log(bounds[i].lo);
        hi[i] = std::log(bounds[i].hi);
    }
    if (!(opts.shrink > 0.0 && opts.shrink < 1.0)) throw ValidationError("maximize: shrink must lie in (0,1)");

    int evals = 0;
    auto eval = [&](const std::vector<double>& u) {
        ++evals;
        double v = f(exp_all(u));
        return std::isnan(v) ? kInfeasible : v;
    };

    double max_range = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_range = std::max(max_range, hi[i] - lo[i]);

    // Compass search on (u, v) until scale * max_range < tol. Returns false
    // when the evaluation budget ran out first.
    auto descend = [&](std::vector<double>& u, double& v, double& scale, double tol) {
        while (scale * max_range >= tol) {
            if (evals >= opts.max_evaluations) return false;
            bool improved = false;
            for (std::size_t i = 0; i < n; ++i) {
                double step = scale * (hi[i] - lo[i]);
                if (step == 0.0) continue;
                for (double dir : {1.0, -1.0}) {
                    auto w = u;
                    w[i] = std::clamp(u[i] + dir * step, lo[i], hi[i]);
                    if (w[i] == u[i]) continue;
                    double vw = eval(w);
                    if (vw != kInfeasible && better(vw, w, v, u)) {
                        u = std::move(w);
                        v = vw;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) scale *= opts.shrink;
        }
        return true;
    };

    // Every start is run to the screening tolerance; only the winner is
    // polished down to rel_step_tol.
    const double screen_tol = std::max(opts.screen_step_tol, opts.rel_step_tol);
    const double start_scale = 0.5 / std::max(1, opts.seeds_per_variable);
    bool have = false, all_converged = true;
    std::vector<double> best_u;
    double best_v = kInfeasible, best_scale = start_scale;

    for (const auto& s : starts) {
        if (s.size() != n) throw ValidationError("maximize: start has wrong dimension");
        if (evals >= opts.max_evaluations) {
            all_converged = false;
            break;
        }
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = std::clamp(std::log(s[i]), lo[i], hi[i]);
        double v = eval(u);
        if (v == kInfeasible) continue;
        double scale = start_scale;
        all_converged = descend(u, v, scale, screen_tol) && all_converged;
        if (!have || better(v, u, best_v, best_u)) {
            have = true;
            best_u = u;
            best_v = v;
            best_scale = scale;
        }
    }
    if (have) all_converged = descend(best_u, best_v, best_scale, opts.rel_step_tol) && all_converged;
    if (!have) throw ValidationError("maximize: no feasible start");
    std::vector<double> x = exp_all(best_u);
    for (std::size_t i = 0; i < n; ++i) {
        // exp(log(b)) can miss b by an ulp
        if (best_u[i] == lo[i]) x[i] = bounds[i].lo;
        if (best_u[i] == hi[i]) x[i] = bounds[i].hi;
    }
    return {x, best_v, evals, all_converged};
}

int seeds_for_dimension(const SearchOptions& opts, std::size_t n) {
    int k = opts.seeds_per_variable;
    auto grid_size = [n](int m) {
        double s = 1.0;
        for (std::size_t i = 0; i < n; ++i) s *= m;
        return s;
    };
    while (k > 3 && grid_size(k) > opts.max_starts) --k;
    return k;
}

SearchResult maximize(const Objective& f, const std::vector<VariableBounds>& bounds, const SearchOptions& opts) {
    return maximize(f, bounds, log_seed_grid(bounds, seeds_for_dimension(opts, bounds.size())), opts);
}

ChannelGeometry geometry_from_ratio(double x, double l_bc_km, double alpha_db_per_km) {
    return ChannelGeometry::from_ratio(x, l_bc_km, alpha_db_per_km);
}

namespace {

// Maps search coordinates onto intensity settings for a given constraint.
struct Layout {
    std::vector<VariableBounds> bounds;
    std::vector<std::string> names;
    bool with_nu = false;
    IntensityConstraint constraint = IntensityConstraint::Free;
    double x = 1.0;  // t_a / t_b
    double omega = 0.0;

    IntensitySettings settings(const std::vector<double>& v) const {
        IntensitySettings s;
        s.alice.omega = s.bob.omega = omega;
        switch (constraint) {
            case IntensityConstraint::Free:
                if (with_nu) {
                    s.alice.mu = v[0];
                    s.alice.nu = v[1];
                    s.bob.mu = v[2];
                    s.bob.nu = v[3];
                } else {
                    s.alice.mu = v[0];
                    s.bob.mu = v[1];
                }
                break;
            case IntensityConstraint::PartySymmetric:
                s.alice.mu = s.bob.mu = v[0];
                if (with_nu) s.alice.nu = s.bob.nu = v[1];
                break;
            case IntensityConstraint::ArrivalMatched:
                s.bob.mu = v[0];
                s.alice.mu = v[0] / x;
                if (with_nu) {
                    s.bob.nu = v[1];
                    s.alice.nu = v[1] / x;
                }
                break;
        }
        return s;
    }
};

VariableBounds matched_bounds(VariableBounds b, double x) {
    // the free coordinate is Bob's value; Alice's is value / x
    VariableBounds r{std::max(b.lo, b.lo * x), std::min(b.hi, b.hi * x)};
    if (!(r.lo <= r.hi)) throw ValidationError("no feasible arrival-matched intensities for this x");
    return r;
}

Layout make_layout(IntensityConstraint c, bool with_nu, double x, const OptimizerConfig& cfg) {
    Layout L;
    L.constraint = c;
    L.with_nu = with_nu;
    L.x = x;
    L.omega = with_nu ? cfg.omega_floor : 0.0;
    VariableBounds nu = cfg.nu;
    if (with_nu) nu.lo = std::max(nu.lo, 2.0 * cfg.omega_floor);
    switch (c) {
        case IntensityConstraint::Free:
            if (with_nu) {
                L.bounds = {cfg.mu, nu, cfg.mu, nu};
                L.names = {"mu_a", "nu_a", "mu_b", "nu_b"};
            } else {
                L.bounds = {cfg.mu, cfg.mu};
                L.names = {"mu_a", "mu_b"};
            }
            break;
        case IntensityConstraint::PartySymmetric:
            L.bounds = {cfg.mu};
            L.names = {"mu"};
            if (with_nu) {
                L.bounds.push_back(nu);
                L.names.push_back("nu");
            }
            break;
        case IntensityConstraint::ArrivalMatched:
            L.bounds = {matched_bounds(cfg.mu, x)};
            L.names = {"mu_b"};
            if (with_nu) {
                L.bounds.push_back(matched_bounds(nu, x));
                L.names.push_back("nu_b");
            }
            break;
    }
    return L;
}

bool ordered(const IntensitySettings& s) {
    return s.alice.mu > s.alice.nu && s.alice.nu > s.alice.omega && s.bob.mu > s.bob.nu &&
           s.bob.nu > s.bob.omega;
}

std::vector<std::string> active_bounds(const Layout& L, const std::vector<double>& v) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(std::log(v[i] / L.bounds[i].lo)) < 1e-9) out.push_back(L.names[i] + ".lo");
        if (std::abs(std::log(v[i] / L.bounds[i].hi)) < 1e-9) out.push_back(L.names[i] + ".hi");
    }
    return out;
}

double raw_of(const KeyRateReport& r) { return r.single_photon_term - r.ec_term; }

}  // namespace

OptimizationResult optimize_asymptotic(const ChannelGeometry& geometry, const SystemParams& params,
                                       IntensityConstraint constraint, const OptimizerConfig& cfg) {
    params.validate();
    Layout L = make_layout(constraint, false, geometry.x(), cfg);
    auto f = [&](const std::vector<double>& v) {
        IntensitySettings s = L.settings(v);
        return raw_of(asymptotic_rate(s.alice.mu, s.bob.mu, geometry, params, cfg.asymptotic));
    };
    SearchResult sr = maximize(f, L.bounds, cfg.search);
    OptimizationResult r;
    r.best_settings = L.settings(sr.x);
    r.report = asymptotic_rate(r.best_settings.alice.mu, r.best_settings.bob.mu, geometry, params, cfg.asymptotic);
    r.best_rate = r.report.rate;
    r.best_raw = raw_of(r.report);
    r.evaluations = sr.evaluations;
    r.converged = sr.converged;
    r.constraint_active = active_bounds(L, sr.x);
    return r;
}

OptimizationResult optimize_two_decoy(const ChannelGeometry& geometry, const SystemParams& params,
                                      IntensityConstraint constraint, const OptimizerConfig& cfg) {
    params.validate();
    Layout L = make_layout(constraint, true, geometry.x(), cfg);
    auto f = [&](const std::vector<double>& v) {
        IntensitySettings s = L.settings(v);
        if (!ordered(s)) return kInfeasible;
        return raw_of(two_decoy_rate(s, geometry, params));
    };
    SearchResult sr = maximize(f, L.bounds, cfg.search);
    OptimizationResult r;
    r.best_settings = L.settings(sr.x);
    r.report = two_decoy_rate(r.best_settings, geometry, params);
    r.best_rate = r.report.rate;
    r.best_raw = raw_of(r.report);
    r.evaluations = sr.evaluations;
    r.converged = sr.converged;
    r.constraint_active = active_bounds(L, sr.x);
    r.constraint_active.push_back("omega.floor");
    return r;
}

OptimizationResult optimize_r_est(const ChannelGeometry& geometry, const SystemParams& params,
                                  IntensityConstraint constraint, const OptimizerConfig& cfg) {
    params.validate();
    const double x = geometry.x();
    Layout L = make_layout(constraint, false, x, cfg);
    auto f = [&](const std::vector<double>& v) {
        IntensitySettings s = L.settings(v);
        return g_function(x, s.alice.mu, s.bob.mu, params);
    };
    SearchResult sr = maximize(f, L.bounds, cfg.search);
    OptimizationResult r;
    r.best_settings = L.settings(sr.x);
    const double tb = geometry.t_b();
    r.best_raw = tb * tb * params.eta_d * params.eta_d / 2.0 * sr.value;
    r.best_rate = r_est(geometry, r.best_settings.alice.mu, r.best_settings.bob.mu, params);
    r.report.rate = r.best_rate;
    r.report.intensities = r.best_settings;
    r.report.l_ac_km = geometry.l_ac_km();
    r.report.l_bc_km = geometry.l_bc_km();
    r.evaluations = sr.evaluations;
    r.converged = sr.converged;
    r.constraint_active = active_bounds(L, sr.x);
    return r;
}

OptimizationResult optimize_rate(RateMode mode, const ChannelGeometry& geometry, const SystemParams& params,
                                 IntensityConstraint constraint, const OptimizerConfig& cfg) {
    if (mode == RateMode::AsymptoticTruth) return optimize_asymptotic(geometry, params, constraint, cfg);
    return optimize_two_decoy(geometry, params, constraint, cfg);
}

std::vector<SweepRow> optimal_intensity_sweep(RateMode mode, const std::vector<double>& total_km,
                                              const SystemParams& params, const OptimizerConfig& cfg) {
    std::vector<SweepRow> rows;
    for (double L : total_km) {
        ChannelGeometry g = ChannelGeometry::symmetric(L, params.alpha_db_per_km);
        OptimizationResult r = optimize_rate(mode, g, params, IntensityConstraint::PartySymmetric, cfg);
        SweepRow row;
        row.l_total_km = L;
        row.mu = r.best_settings.alice.mu;
        row.nu = r.best_settings.alice.nu;
        row.omega = r.best_settings.alice.omega;
        row.rate = r.best_rate;
        rows.push_back(row);
    }
    return rows;
}

AsymmetricComparison asymmetric_compare(double x, double l_bc_km, RateMode mode, const SystemParams& params,
                                        const OptimizerConfig& cfg) {
    ChannelGeometry g = geometry_from_ratio(x, l_bc_km, params.alpha_db_per_km);
    AsymmetricComparison c;
    c.x = x;
    c.l_bc_km = g.l_bc_km();
    c.l_ac_km = g.l_ac_km();
    c.symmetric_choice = optimize_rate(mode, g, params, IntensityConstraint::ArrivalMatched, cfg);
    c.optimal_choice = optimize_rate(mode, g, params, IntensityConstraint::Free, cfg);
    double rs = c.symmetric_choice.best_rate, ro = c.optimal_choice.best_rate;
    c.advantage = rs > 0.0 ? ro / rs - 1.0 : std::numeric_limits<double>::infinity();
    const auto& s = c.optimal_choice.best_settings;
    c.arrival_ratio = s.alice.mu * g.t_a() / (s.bob.mu * g.t_b());
    return c;
}

ScalingReport scaling_check(double x, const std::vector<double>& scale_factors, const SystemParams& params,
                              const OptimizerConfig& cfg) {
    if (!(x > 0.0)) throw ValidationError("x must be > 0");
    SystemParams p = params;
    p.y0 = 0.0;
    const double tb0 = std::min(1.0, 1.0 / x);
    const double ta0 = x * tb0;

    ScalingReport rep;
    rep.x = x;
    ChannelGeometry base = ChannelGeometry::from_transmittances(ta0, tb0, p.alpha_db_per_km);
    OptimizationResult b = optimize_r_est(base, p, IntensityConstraint::Free, cfg);
    rep.base_mu_a = b.best_settings.alice.mu;
    rep.base_mu_b = b.best_settings.bob.mu;
    rep.base_rate = b.best_rate;

    for (double s : scale_factors) {
        if (!(s > 0.0 && s <= 1.0)) throw ValidationError("scale factors must lie in (0,1]");
        ChannelGeometry g = ChannelGeometry::from_transmittances(ta0 * s, tb0 * s, p.alpha_db_per_km);
        OptimizationResult r = optimize_r_est(g, p, IntensityConstraint::Free, cfg);
        ScalingPoint pt;
        pt.scale = s;
        pt.mu_a = r.best_settings.alice.mu;
        pt.mu_b = r.best_settings.bob.mu;
        pt.rate = r.best_rate;
        pt.rate_ratio = rep.base_rate > 0.0 ? r.best_rate / rep.base_rate : 0.0;
        rep.max_argmax_shift =
            std::max({rep.max_argmax_shift, std::abs(pt.mu_a - rep.base_mu_a), std::abs(pt.mu_b - rep.base_mu_b)});
        rep.max_scaling_rel_error = std::max(rep.max_scaling_rel_error, std::abs(pt.rate_ratio / (s * s) - 1.0));
        rep.points.push_back(pt);
    }

    // slope along L_bc with the ratio held fixed
    std::vector<double> ls, logs;
    double l0 = base.l_bc_km();
    for (int k = 0; k <= 5; ++k) {
        double l = l0 + 10.0 * k;
        ChannelGeometry g = geometry_from_ratio(x, l, p.alpha_db_per_km);
        OptimizationResult r = optimize_r_est(g, p, IntensityConstraint::Free, cfg);
        if (r.best_rate > 0.0) {
            ls.push_back(l);
            logs.push_back(std::log10(r.best_rate));
        }
    }
    if (ls.size() >= 2) rep.log_slope_per_km = fit_line(ls, logs).slope;
    return rep;
}

}  // namespace mdiqkd
