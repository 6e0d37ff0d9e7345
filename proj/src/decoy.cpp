#include "mdiqkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "mdiqkd/csv.hpp"
#include "mdiqkd/error.hpp"

namespace mdiqkd {

namespace {

constexpr Level kLevels[3] = {Level::Mu, Level::Nu, Level::Omega};
constexpr Basis kBases[2] = {Basis::Z, Basis::X};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Level parse_level(const std::string& s) {
    if (s == "mu") return Level::Mu;
    if (s == "nu") return Level::Nu;
    if (s == "omega") return Level::Omega;
    throw ValidationError("unknown intensity level '" + s + "'");
}

Basis parse_basis(const std::string& s) {
    if (s == "Z") return Basis::Z;
    if (s == "X") return Basis::X;
    throw ValidationError("unknown basis '" + s + "'");
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("bad number '" + s + "'");
    }
    if (used != s.size()) throw ValidationError("bad number '" + s + "'");
    return v;
}

// e^{qa+qb} Q^{qa qb} summed over the four corners built from levels (hi, lo).
double corner_combination(const GainTable& t, const IntensitySettings& s, Basis b, Level hi, Level lo,
                          bool error_weighted) {
    auto term = [&](Level la, Level lb) {
        const GainEntry& e = t.at(b, la, lb);
        double v = error_weighted ? e.eq : e.q;
        return std::exp(intensity_of(s.alice, la) + intensity_of(s.bob, lb)) * v;
    };
    return term(hi, hi) + term(lo, lo) - term(hi, lo) - term(lo, hi);
}

void require_nonzero(double d, const char* what) {
    if (d == 0.0) throw DegenerateIntensityError(std::string("degenerate intensities: ") + what + " is zero");
}

}  // namespace

const char* level_name(Level l) {
    switch (l) {
        case Level::Mu: return "mu";
        case Level::Nu: return "nu";
        case Level::Omega: return "omega";
    }
    return "?";
}

const char* case_name(DecoyCase c) { return c == DecoyCase::Case1 ? "case1" : "case2"; }

double intensity_of(const PartyIntensities& p, Level l) {
    switch (l) {
        case Level::Mu: return p.mu;
        case Level::Nu: return p.nu;
        case Level::Omega: return p.omega;
    }
    return 0.0;
}

void GainTable::write_csv(std::ostream& os) const {
    csv_write_row(os, {"basis", "q_a", "q_b", "Q", "EQ"});
    for (Basis b : kBases)
        for (Level la : kLevels)
            for (Level lb : kLevels) {
                const GainEntry& e = at(b, la, lb);
                csv_write_row(os, {basis_name(b), level_name(la), level_name(lb), csv_number(e.q), csv_number(e.eq)});
            }
}

GainTable GainTable::read_csv(std::istream& is) {
    GainTable t;
    bool seen[2][3][3] = {};
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty gain table");
    if (csv_split(line) != std::vector<std::string>{"basis", "q_a", "q_b", "Q", "EQ"})
        throw ValidationError("gain table header must be basis,q_a,q_b,Q,EQ");
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto cells = csv_split(line);
        if (cells.size() != 5) throw ValidationError("gain table row " + std::to_string(row) + ": expected 5 fields");
        Basis b = parse_basis(cells[0]);
        Level la = parse_level(cells[1]);
        Level lb = parse_level(cells[2]);
        GainEntry e{parse_number(cells[3]), parse_number(cells[4])};
        if (!(e.q >= 0.0 && e.q <= 1.0 && e.eq >= 0.0 && e.eq <= e.q))
            throw ValidationError("gain table row " + std::to_string(row) + ": need 0 <= EQ <= Q <= 1");
        bool& s = seen[idx(b)][idx(la)][idx(lb)];
        if (s) throw ValidationError("gain table row " + std::to_string(row) + ": duplicate entry");
        s = true;
        t.at(b, la, lb) = e;
    }
    for (Basis b : kBases)
        for (Level la : kLevels)
            for (Level lb : kLevels)
                if (!seen[idx(b)][idx(la)][idx(lb)])
                    throw ValidationError(std::string("gain table missing entry ") + basis_name(b) + "," +
                                          level_name(la) + "," + level_name(lb));
    return t;
}

GainTable build_gain_table(const IntensitySettings& settings, const ChannelGeometry& geometry,
                           const SystemParams& params) {
    validate_intensities(settings);
    params.validate();
    const auto samples = misalignment_samples(params);
    GainTable t;
    for (Basis b : kBases)
        for (Level la : kLevels)
            for (Level lb : kLevels) {
                double ga = std::sqrt(intensity_of(settings.alice, la) * geometry.t_a() * params.eta_d);
                double gb = std::sqrt(intensity_of(settings.bob, lb) * geometry.t_b() * params.eta_d);
                GainQber g = gain_and_qber_amplitudes(b, ga, gb, params, samples);
                t.at(b, la, lb) = {g.gain, g.error_gain};
            }
    return t;
}

double y11_bound_for_case(const GainTable& table, const IntensitySettings& s, Basis basis, DecoyCase c) {
    const auto& a = s.alice;
    const auto& b = s.bob;
    require_nonzero(a.mu - a.omega, "mu_a - omega_a");
    require_nonzero(b.mu - b.omega, "mu_b - omega_b");
    require_nonzero(a.nu - a.omega, "nu_a - omega_a");
    require_nonzero(b.nu - b.omega, "nu_b - omega_b");
    const double m1 = corner_combination(table, s, basis, Level::Nu, Level::Omega, false);
    const double m2 = corner_combination(table, s, basis, Level::Mu, Level::Omega, false);
    const double common = (a.mu - a.omega) * (b.mu - b.omega) * (a.nu - a.omega) * (b.nu - b.omega);
    if (c == DecoyCase::Case1) {
        require_nonzero(a.mu - a.nu, "mu_a - nu_a");
        double num = (a.mu * a.mu - a.omega * a.omega) * (b.mu - b.omega) * m1 -
                     (a.nu * a.nu - a.omega * a.omega) * (b.nu - b.omega) * m2;
        return num / (common * (a.mu - a.nu));
    }
    require_nonzero(b.mu - b.nu, "mu_b - nu_b");
    double num = (b.mu * b.mu - b.omega * b.omega) * (a.mu - a.omega) * m1 -
                 (b.nu * b.nu - b.omega * b.omega) * (a.nu - a.omega) * m2;
    return num / (common * (b.mu - b.nu));
}

Y11Bound y11_lower_bound(const GainTable& table, const IntensitySettings& s, Basis basis) {
    require_nonzero(s.alice.nu + s.alice.omega, "nu_a + omega_a");
    require_nonzero(s.bob.nu + s.bob.omega, "nu_b + omega_b");
    double ra = (s.alice.mu + s.alice.omega) / (s.alice.nu + s.alice.omega);
    double rb = (s.bob.mu + s.bob.omega) / (s.bob.nu + s.bob.omega);
    Y11Bound out;
    out.case_used = ra <= rb ? DecoyCase::Case1 : DecoyCase::Case2;
    out.raw = y11_bound_for_case(table, s, basis, out.case_used);
    out.value = clamp01(out.raw);
    return out;
}

E11Bound e11_upper_bound_detail(const GainTable& table, const IntensitySettings& s, double y11_x_lower) {
    require_nonzero(s.alice.nu - s.alice.omega, "nu_a - omega_a");
    require_nonzero(s.bob.nu - s.bob.omega, "nu_b - omega_b");
    if (!(y11_x_lower > 0.0)) throw NumericalError("y11_x lower bound is zero: single-photon error is unbounded");
    double num = corner_combination(table, s, Basis::X, Level::Nu, Level::Omega, true);
    E11Bound out;
    out.raw = num / ((s.alice.nu - s.alice.omega) * (s.bob.nu - s.bob.omega) * y11_x_lower);
    out.value = clamp01(out.raw);
    return out;
}

double e11_upper_bound(const GainTable& table, const IntensitySettings& s, double y11_x_lower) {
    return e11_upper_bound_detail(table, s, y11_x_lower).value;
}

DecoyBounds decoy_bounds(const GainTable& table, const IntensitySettings& settings) {
    DecoyBounds d;
    d.y11_z = y11_lower_bound(table, settings, Basis::Z);
    d.y11_x = y11_lower_bound(table, settings, Basis::X);
    if (d.y11_x.value > 0.0) {
        d.e11_x = e11_upper_bound_detail(table, settings, d.y11_x.value);
        d.e11_bounded = true;
    } else {
        d.e11_x = {1.0, std::nan("")};
    }
    return d;
}

}  // namespace mdiqkd
