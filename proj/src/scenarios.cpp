#include "mdiqkd/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "mdiqkd/analytic.hpp"
#include "mdiqkd/asymmetric.hpp"
#include "mdiqkd/csv.hpp"
#include "mdiqkd/decoy.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/interference.hpp"

namespace mdiqkd {

void CsvTable::write(std::ostream& os) const {
    csv_write_row(os, header);
    for (const auto& r : rows) csv_write_row(os, r);
}

std::string table_number(double v, const std::string& column) {
    if (!std::isfinite(v)) throw NumericalError("non-finite value in column '" + column + "'");
    return csv_number(v);
}

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// Two-rotation Bessel model without mode mismatch; the asymmetric-channel
// analyses are all built on it.
const Overrides kTwoRotation = {{"system.misalignment_mode", "two-rotation"}, {"system.e_m", "0"}};

Overrides join(Overrides a, const Overrides& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::map<std::string, Overrides>& preset_table() {
    static const std::map<std::string, Overrides> t = {
        {"fig3",
         {{"system.e_m", "0"},
          {"sweep.distances_km", "0, 120"},
          {"sweep.e_d_values", "0.02, 0.04, 0.06, 0.07"}}},
        {"fig5",
         {{"system.e_d", "0"},
          {"sweep.distances_km", "0, 120"},
          {"sweep.e_m_values", "0, 0.2, 0.4, 0.6, 0.8, 0.9"}}},
        // two-decoy optimization on every point: fewer samples and starts
        {"fig6-asymptotic",
         {{"rate.mode", "two-decoy"},
          {"numerics.mc_samples", "200"},
          {"optimizer.seeds_per_variable", "3"},
          {"sweep.distances_km", "0, 20, 40, 60, 80, 100"}}},
        {"fig7", join(kTwoRotation, {{"sweep.distances_km", "0"},
                                     {"sweep.y0_values", "1e-6, 1e-5, 1e-4, 3e-4, 5e-4, 1e-3, 2e-3"}})},
        {"fig8",
         {{"numerics.mc_samples", "200"},
          {"optimizer.seeds_per_variable", "3"},
          {"sweep.modes", "asymptotic, two-decoy"},
          {"sweep.distances_km", "0, 25, 50, 75, 100, 125"}}},
        {"fig9", join(kTwoRotation, {{"optimizer.constraint", "free"},
                                     {"sweep.l_bc_km_values", "0.001, 10, 20"},
                                     {"sweep.l_ac_km_values", "0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120"},
                                     {"sweep.mismatch_l_bc_km", "0.001"}})},
        {"fig10", join(kTwoRotation, {{"optimizer.constraint", "free"},
                                      {"sweep.l_ac_km_values", "0, 20, 40, 60, 80"},
                                      {"sweep.l_bc_km_values", "0, 20, 40, 60, 80"}})},
        {"fig11", join(kTwoRotation, {{"optimizer.constraint", "free"},
                                      {"sweep.modes", "asymptotic, two-decoy"},
                                      {"sweep.x_values", "0.1, 0.9"},
                                      {"sweep.l_bc_km_values", "0, 10, 20, 30, 40, 50"}})},
        {"table4", join(kTwoRotation, {{"sweep.modes", "asymptotic, two-decoy"},
                                       {"sweep.x_values", "0.1"},
                                       {"sweep.l_bc_km_values", "0, 10, 20"}})},
    };
    return t;
}

std::string num(double v, const char* column) { return table_number(v, column); }

std::vector<RateMode> modes_of(const Config& cfg) {
    std::vector<RateMode> out;
    std::istringstream is(cfg.text("sweep.modes"));
    std::string item;
    while (std::getline(is, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item == "asymptotic")
            out.push_back(RateMode::AsymptoticTruth);
        else if (item == "two-decoy")
            out.push_back(RateMode::TwoDecoyBounds);
        else
            throw ConfigError("config key 'sweep.modes': unknown mode '" + item + "'");
    }
    if (out.empty()) throw ConfigError("config key 'sweep.modes' is empty");
    return out;
}

// Distances in sweep.distances_km are total lengths unless the convention is
// per-arm, in which case each arm gets the full value.
double total_length(const Config& cfg, double d) {
    const std::string& conv = cfg.text("sweep.distance_convention");
    if (conv == "total") return d;
    if (conv == "per-arm") return 2.0 * d;
    throw ConfigError("config key 'sweep.distance_convention': expected total or per-arm, got '" + conv + "'");
}

std::vector<double> totals(const Config& cfg) {
    std::vector<double> out;
    for (double d : cfg.numbers("sweep.distances_km")) out.push_back(total_length(cfg, d));
    return out;
}

// Symmetric-channel tolerance scan: one optimized asymptotic rate per
// (value, distance).
CsvTable tolerance_scan(const std::string& name, const std::string& column, const std::string& key,
                        const Config& cfg, void (*apply)(SystemParams&, double)) {
    const SystemParams base = cfg.system();
    const OptimizerConfig oc = cfg.optimizer();
    const IntensityConstraint con = cfg.constraint();
    CsvTable t{name, {column, "L_total_km", "rate", "mu_a", "mu_b"}, {}};
    for (double L : totals(cfg)) {
        for (double v : cfg.numbers(key)) {
            SystemParams p = base;
            apply(p, v);
            try {
                p.validate();
            } catch (const ValidationError& e) {
                throw ConfigError("config key '" + key + "': " + e.what());
            }
            OptimizationResult r =
                optimize_asymptotic(ChannelGeometry::symmetric(L, p.alpha_db_per_km), p, con, oc);
            t.rows.push_back({num(v, column.c_str()), num(L, "L_total_km"), num(r.best_rate, "rate"),
                              num(r.best_settings.alice.mu, "mu_a"), num(r.best_settings.bob.mu, "mu_b")});
        }
    }
    return t;
}

void set_e_d(SystemParams& p, double v) {
    if (p.misalignment_mode == MisalignmentMode::GaussianMC)
        p.e_d = v;
    else
        p = p.with_symmetric_fixed_misalignment(v);
}
void set_e_m(SystemParams& p, double v) { p.e_m = v; }
void set_y0(SystemParams& p, double v) { p.y0 = v; }

std::vector<CsvTable> run_fig6(const Config& cfg) {
    const SystemParams p = cfg.system();
    CsvTable t{"fig6", {"L_total_km", "mu", "nu", "omega", "rate"}, {}};
    for (const SweepRow& r : optimal_intensity_sweep(cfg.rate_mode(), totals(cfg), p, cfg.optimizer())) {
        t.rows.push_back({num(r.l_total_km, "L_total_km"), num(r.mu, "mu"), num(r.nu, "nu"), num(r.omega, "omega"),
                          num(r.rate, "rate")});
    }
    return {t};
}

std::vector<CsvTable> run_fig8(const Config& cfg) {
    const SystemParams p = cfg.system();
    CsvTable t{"fig8", {"mode", "L_total_km", "rate", "mu", "nu", "omega"}, {}};
    for (RateMode m : modes_of(cfg)) {
        for (const SweepRow& r : optimal_intensity_sweep(m, totals(cfg), p, cfg.optimizer())) {
            t.rows.push_back({rate_mode_name(m), num(r.l_total_km, "L_total_km"), num(r.rate, "rate"),
                              num(r.mu, "mu"), num(r.nu, "nu"), num(r.omega, "omega")});
        }
    }
    return {t};
}

std::vector<CsvTable> run_fig9(const Config& cfg) {
    const SystemParams p = cfg.system();
    const OptimizerConfig oc = cfg.optimizer();
    CsvTable t{"fig9",
               {"L_ac_km", "L_bc_km", "x", "R_rig", "mu_a_rig", "mu_b_rig", "R_est", "mu_a_est", "mu_b_est"},
               {}};
    for (const RigEstRow& r : rig_vs_est_scan(cfg.numbers("sweep.l_bc_km_values"),
                                              cfg.numbers("sweep.l_ac_km_values"), p, oc)) {
        t.rows.push_back({num(r.l_ac_km, "L_ac_km"), num(r.l_bc_km, "L_bc_km"), num(r.x, "x"), num(r.r_rig, "R_rig"),
                          num(r.mu_a_rig, "mu_a_rig"), num(r.mu_b_rig, "mu_b_rig"), num(r.r_est, "R_est"),
                          num(r.mu_a_est, "mu_a_est"), num(r.mu_b_est, "mu_b_est")});
    }
    MismatchLimit m = max_tolerable_mismatch(cfg.number("sweep.mismatch_l_bc_km"), p, 300.0, 0.05, oc);
    CsvTable lim{"fig9_mismatch", {"L_bc_km", "L_ac_km", "x"}, {}};
    lim.rows.push_back({num(m.l_bc_km, "L_bc_km"), num(m.l_ac_km, "L_ac_km"), num(m.x, "x")});
    return {t, lim};
}

std::vector<CsvTable> run_fig10(const Config& cfg) {
    const SystemParams p = cfg.system();
    const OptimizerConfig oc = cfg.optimizer();
    const IntensityConstraint con = cfg.constraint();
    CsvTable t{"fig10", {"L_ac_km", "L_bc_km", "x", "mu_a", "mu_b", "rate"}, {}};
    for (double lbc : cfg.numbers("sweep.l_bc_km_values")) {
        for (double lac : cfg.numbers("sweep.l_ac_km_values")) {
            ChannelGeometry g = ChannelGeometry::from_lengths(lac, lbc, p.alpha_db_per_km);
            OptimizationResult r = optimize_asymptotic(g, p, con, oc);
            t.rows.push_back({num(lac, "L_ac_km"), num(lbc, "L_bc_km"), num(g.x(), "x"),
                              num(r.best_settings.alice.mu, "mu_a"), num(r.best_settings.bob.mu, "mu_b"),
                              num(r.best_rate, "rate")});
        }
    }
    return {t};
}

std::vector<CsvTable> run_fig11(const Config& cfg) {
    const SystemParams p = cfg.system();
    const OptimizerConfig oc = cfg.optimizer();
    CsvTable t{"fig11",
               {"mode", "x", "L_bc_km", "L_ac_km", "rate", "R_est", "mu_a", "mu_b", "nu_a", "nu_b", "mu_ratio",
                "nu_ratio"},
               {}};
    CsvTable slope{"fig11_slope", {"mode", "x", "slope_log10_rate_per_km", "slope_log10_R_est_per_km"}, {}};
    for (RateMode m : modes_of(cfg)) {
        for (double x : cfg.numbers("sweep.x_values")) {
            auto rows = fixed_x_scan(x, cfg.numbers("sweep.l_bc_km_values"), m, p, oc);
            for (const FixedXRow& r : rows) {
                const auto& s = r.intensities;
                t.rows.push_back({rate_mode_name(m), num(x, "x"), num(r.l_bc_km, "L_bc_km"), num(r.l_ac_km, "L_ac_km"),
                                  num(r.rate, "rate"), num(r.r_est, "R_est"), num(s.alice.mu, "mu_a"),
                                  num(s.bob.mu, "mu_b"), num(s.alice.nu, "nu_a"), num(s.bob.nu, "nu_b"),
                                  num(r.mu_ratio, "mu_ratio"), num(r.nu_ratio, "nu_ratio")});
            }
            double est = m == RateMode::AsymptoticTruth ? log_rate_slope(rows, true) : 0.0;
            slope.rows.push_back({rate_mode_name(m), num(x, "x"),
                                  num(log_rate_slope(rows, false), "slope_log10_rate_per_km"),
                                  num(est, "slope_log10_R_est_per_km")});
        }
    }
    return {t, slope};
}

std::vector<std::string> settings_cells(const IntensitySettings& s) {
    return {num(s.alice.mu, "mu_a"),    num(s.alice.nu, "nu_a"), num(s.alice.omega, "omega_a"),
            num(s.bob.mu, "mu_b"),      num(s.bob.nu, "nu_b"),   num(s.bob.omega, "omega_b")};
}

std::vector<CsvTable> run_table4(const Config& cfg) {
    const SystemParams p = cfg.system();
    const OptimizerConfig oc = cfg.optimizer();
    CsvTable t{"table4",
               {"mode", "x", "L_bc_km", "L_ac_km", "choice", "mu_a", "nu_a", "omega_a", "mu_b", "nu_b", "omega_b",
                "rate"},
               {}};
    CsvTable adv{"table4_advantage", {"mode", "x", "L_bc_km", "advantage", "arrival_ratio"}, {}};
    for (RateMode m : modes_of(cfg)) {
        for (double x : cfg.numbers("sweep.x_values")) {
            for (double lbc : cfg.numbers("sweep.l_bc_km_values")) {
                AsymmetricComparison c = asymmetric_compare(x, lbc, m, p, oc);
                for (int k = 0; k < 2; ++k) {
                    const OptimizationResult& r = k == 0 ? c.symmetric_choice : c.optimal_choice;
                    std::vector<std::string> row = {rate_mode_name(m), num(x, "x"), num(c.l_bc_km, "L_bc_km"),
                                                    num(c.l_ac_km, "L_ac_km"), k == 0 ? "symmetric" : "optimal"};
                    for (auto& cell : settings_cells(r.best_settings)) row.push_back(cell);
                    row.push_back(num(r.best_rate, "rate"));
                    t.rows.push_back(std::move(row));
                }
                adv.rows.push_back({rate_mode_name(m), num(x, "x"), num(c.l_bc_km, "L_bc_km"),
                                    num(c.advantage, "advantage"), num(c.arrival_ratio, "arrival_ratio")});
            }
        }
    }
    return {t, adv};
}

CsvTable gain_table_csv(const GainTable& g) {
    std::ostringstream os;
    g.write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    CsvTable t{"gain_table", {}, {}};
    bool first = true;
    while (std::getline(is, line)) {
        if (first) {
            t.header = csv_split(line);
            first = false;
        } else if (!line.empty()) {
            t.rows.push_back(csv_split(line));
        }
    }
    return t;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : preset_table()) v.push_back(k);
        return v;
    }();
    return names;
}

void apply_preset(const std::string& name, Config& cfg) {
    auto it = preset_table().find(name);
    if (it == preset_table().end()) throw ConfigError("unknown preset '" + name + "'");
    for (const auto& [k, v] : it->second) cfg.set(k, v);
}

std::vector<CsvTable> run_preset(const std::string& name, const Config& cfg) {
    if (!preset_table().count(name)) throw ConfigError("unknown preset '" + name + "'");
    if (name == "fig3") return {tolerance_scan("fig3", "e_d", "sweep.e_d_values", cfg, set_e_d)};
    if (name == "fig5") return {tolerance_scan("fig5", "e_m", "sweep.e_m_values", cfg, set_e_m)};
    if (name == "fig6-asymptotic") return run_fig6(cfg);
    if (name == "fig7") return {tolerance_scan("fig7", "y0", "sweep.y0_values", cfg, set_y0)};
    if (name == "fig8") return run_fig8(cfg);
    if (name == "fig9") return run_fig9(cfg);
    if (name == "fig10") return run_fig10(cfg);
    if (name == "fig11") return run_fig11(cfg);
    return run_table4(cfg);
}

std::vector<CsvTable> run_simulate(const Config& cfg) {
    return {gain_table_csv(build_gain_table(cfg.intensities(), cfg.geometry(), cfg.system()))};
}

std::vector<CsvTable> run_decoy_bounds(const Config& cfg) {
    const IntensitySettings s = cfg.intensities();
    const SystemParams p = cfg.system();
    const GainTable g = build_gain_table(s, cfg.geometry(), p);
    const DecoyBounds b = decoy_bounds(g, s);
    const KeyRateReport r = two_decoy_rate_from_table(g, s, p);

    CsvTable bounds{"decoy_bounds", {"quantity", "value", "raw", "case"}, {}};
    bounds.rows.push_back({"y11_z_lower", num(b.y11_z.value, "value"), num(b.y11_z.raw, "raw"),
                           case_name(b.y11_z.case_used)});
    bounds.rows.push_back({"y11_x_lower", num(b.y11_x.value, "value"), num(b.y11_x.raw, "raw"),
                           case_name(b.y11_x.case_used)});
    if (b.e11_bounded)
        bounds.rows.push_back({"e11_x_upper", num(b.e11_x.value, "value"), num(b.e11_x.raw, "raw"), ""});
    else
        bounds.rows.push_back({"e11_x_upper", "0.5", "0.5", "unbounded"});

    CsvTable rate{"two_decoy_rate",
                  {"rate", "single_photon_term", "ec_term", "p11_z", "y11_z", "e11_x", "q_z", "e_z"},
                  {{num(r.rate, "rate"), num(r.single_photon_term, "single_photon_term"), num(r.ec_term, "ec_term"),
                    num(r.p11_z, "p11_z"), num(r.y11_z, "y11_z"), num(r.e11_x, "e11_x"), num(r.q_z, "q_z"),
                    num(r.e_z, "e_z")}}};
    return {gain_table_csv(g), bounds, rate};
}

std::vector<CsvTable> run_optimize(const Config& cfg) {
    const RateMode m = cfg.rate_mode();
    const ChannelGeometry g = cfg.geometry();
    OptimizationResult r = optimize_rate(m, g, cfg.system(), cfg.constraint(), cfg.optimizer());
    CsvTable t{"optimize",
               {"mode", "constraint", "L_ac_km", "L_bc_km", "mu_a", "nu_a", "omega_a", "mu_b", "nu_b", "omega_b",
                "rate", "raw", "evaluations", "converged", "active_bounds"},
               {}};
    std::vector<std::string> row = {rate_mode_name(m), cfg.text("optimizer.constraint"), num(g.l_ac_km(), "L_ac_km"),
                                    num(g.l_bc_km(), "L_bc_km")};
    IntensitySettings s = r.best_settings;
    if (m == RateMode::AsymptoticTruth) s.alice.nu = s.alice.omega = s.bob.nu = s.bob.omega = 0.0;
    for (auto& cell : settings_cells(s)) row.push_back(cell);
    std::string active;
    for (const auto& a : r.constraint_active) active += (active.empty() ? "" : ";") + a;
    row.insert(row.end(), {num(r.best_rate, "rate"), num(r.best_raw, "raw"), std::to_string(r.evaluations),
                           r.converged ? "true" : "false", active});
    t.rows.push_back(std::move(row));
    return {t};
}

SelftestOutcome run_selftest(const Config& cfg, double tolerance) {
    const int nq = cfg.integer("numerics.quadrature_points");
    SelftestOutcome out;
    CsvTable t{"selftest",
               {"gamma_a", "gamma_b", "e_d1", "y0", "sign", "max_abs_deviation"},
               {}};
    const double gammas[] = {0.01, 0.1, 0.3};
    const double eds[] = {0.0, 0.05, 0.2};
    const double y0s[] = {0.0, 1e-5, 1e-3};
    for (double ga : gammas)
        for (double gb : gammas)
            for (double e1 : eds)
                for (double y0 : y0s)
                    for (AngleSign sign : {AngleSign::Same, AngleSign::Opposite}) {
                        double th = std::asin(std::sqrt(e1));
                        RotationAngles ang{th, sign == AngleSign::Same ? th : -th, 0.0};
                        CoincidenceResult hh = coincidence_gains({Basis::Z, 0, 0}, ang, ga, gb, 0.0, y0, nq);
                        CoincidenceResult hv = coincidence_gains({Basis::Z, 0, 1}, ang, ga, gb, 0.0, y0, nq);
                        BellPair chh = qz_hh_closed_form(ga, gb, e1, y0, sign);
                        BellPair chv = qz_hv_closed_form(ga, gb, e1, y0, sign);
                        double dev = std::max({std::abs(hh.q_triplet - chh.triplet),
                                               std::abs(hh.q_singlet - chh.singlet),
                                               std::abs(hv.q_triplet - chv.triplet),
                                               std::abs(hv.q_singlet - chv.singlet)});
                        out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
                        t.rows.push_back({num(ga, "gamma_a"), num(gb, "gamma_b"), num(e1, "e_d1"), num(y0, "y0"),
                                          sign == AngleSign::Same ? "same" : "opposite",
                                          num(dev, "max_abs_deviation")});
                    }
    out.passed = out.max_abs_deviation <= tolerance;
    out.tables.push_back(std::move(t));
    return out;
}

}  // namespace mdiqkd
