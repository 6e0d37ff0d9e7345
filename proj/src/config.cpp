#include "mdiqkd/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mdiqkd/error.hpp"

namespace mdiqkd {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
    throw ConfigError("config key '" + key + "': expected " + want + ", got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& v) {
    const char* s = v.c_str();
    char* end = nullptr;
    errno = 0;
    double d = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(d)) bad_value(key, v, "a finite number");
    return d;
}

}  // namespace

Config Config::defaults() {
    Config c;
    c.values_ = {
        {"system.eta_d", "0.145"},
        {"system.y0", "6.02e-6"},
        {"system.f_e", "1.16"},
        {"system.alpha_db_per_km", "0.2"},
        {"system.e_d", "0.015"},
        {"system.e_m", "0.02"},
        {"system.split_alice", "0.475"},
        {"system.split_bob", "0.475"},
        {"system.split_measurement", "0.05"},
        // gaussian-mc | fixed-angles | two-rotation
        {"system.misalignment_mode", "gaussian-mc"},
        {"system.theta1", "0"},
        {"system.theta2", "0"},
        {"system.theta3", "0"},
        {"numerics.quadrature_points", "128"},
        {"numerics.mc_samples", "2000"},
        {"numerics.seed", "1"},
        {"numerics.threads", "1"},
        {"rate.mode", "asymptotic"},                      // asymptotic | two-decoy
        {"rate.single_photon_model", "closed-form"},      // closed-form | engine-extraction
        {"optimizer.constraint", "party-symmetric"},      // free | party-symmetric | arrival-matched
        {"optimizer.mu_lo", "1e-4"},
        {"optimizer.mu_hi", "3"},
        {"optimizer.nu_lo", "1e-4"},
        {"optimizer.nu_hi", "1"},
        {"optimizer.omega_floor", "5e-4"},
        {"optimizer.seeds_per_variable", "9"},
        {"optimizer.max_starts", "81"},
        {"optimizer.shrink", "0.5"},
        {"optimizer.rel_step_tol", "1e-4"},
        {"optimizer.screen_step_tol", "1e-2"},
        {"optimizer.max_evaluations", "20000"},
        {"channel.l_ac_km", "0"},
        {"channel.l_bc_km", "0"},
        {"intensities.mu_a", "0.3"},
        {"intensities.nu_a", "0.1"},
        {"intensities.omega_a", "5e-4"},
        {"intensities.mu_b", "0.3"},
        {"intensities.nu_b", "0.1"},
        {"intensities.omega_b", "5e-4"},
        // scenario grids; each preset only reads the ones it needs
        {"sweep.distances_km", "0, 120"},
        {"sweep.distance_convention", "total"},  // total | per-arm
        {"sweep.e_d_values", "0.02, 0.04, 0.06, 0.07"},
        {"sweep.e_m_values", "0, 0.2, 0.4, 0.6, 0.8, 0.9"},
        {"sweep.y0_values", "1e-6, 1e-5, 1e-4, 3e-4, 1e-3, 3e-3"},
        {"sweep.l_ac_km_values", "0, 20, 40, 60, 80"},
        {"sweep.l_bc_km_values", "0, 20, 40, 60, 80"},
        {"sweep.x_values", "0.1"},
        {"sweep.modes", "asymptotic"},
        {"sweep.mismatch_l_bc_km", "0.001"},
    };
    return c;
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second = value;
}

void Config::merge_text(const std::string& text, const std::string& origin) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(where + "empty key or value");
        try {
            set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
}

void Config::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    merge_text(ss.str(), path);
}

const std::string& Config::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key) const { return parse_double(key, text(key)); }

int Config::integer(const std::string& key) const {
    const std::string& v = text(key);
    char* end = nullptr;
    errno = 0;
    long n = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE || n < -2147483647L || n > 2147483647L)
        bad_value(key, v, "an integer");
    return static_cast<int>(n);
}

std::uint64_t Config::unsigned64(const std::string& key) const {
    const std::string& v = text(key);
    if (v.empty() || v[0] == '-') bad_value(key, v, "a non-negative integer");
    char* end = nullptr;
    errno = 0;
    unsigned long long n = std::strtoull(v.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) bad_value(key, v, "a non-negative integer");
    return n;
}

bool Config::boolean(const std::string& key) const {
    const std::string& v = text(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, v, "true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
    std::vector<double> out;
    std::istringstream is(text(key));
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) bad_value(key, text(key), "a comma-separated list of numbers");
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) bad_value(key, text(key), "a non-empty list");
    return out;
}

SystemParams Config::system() const {
    SystemParams p;
    p.eta_d = number("system.eta_d");
    p.y0 = number("system.y0");
    p.f_e = number("system.f_e");
    p.alpha_db_per_km = number("system.alpha_db_per_km");
    p.e_d = number("system.e_d");
    p.e_m = number("system.e_m");
    p.split = {number("system.split_alice"), number("system.split_bob"), number("system.split_measurement")};
    p.quadrature_points = integer("numerics.quadrature_points");
    p.mc_samples = integer("numerics.mc_samples");
    p.rng_seed = unsigned64("numerics.seed");
    p.threads = integer("numerics.threads");
    const std::string& mode = text("system.misalignment_mode");
    try {
        if (mode == "gaussian-mc") {
            p.misalignment_mode = MisalignmentMode::GaussianMC;
        } else if (mode == "fixed-angles") {
            p.misalignment_mode = MisalignmentMode::FixedAngles;
            p.fixed_angles = {number("system.theta1"), number("system.theta2"), number("system.theta3")};
        } else if (mode == "two-rotation") {
            p = p.with_symmetric_fixed_misalignment(p.e_d);
        } else {
            bad_value("system.misalignment_mode", mode, "gaussian-mc, fixed-angles or two-rotation");
        }
        p.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("invalid system parameters: ") + e.what());
    }
    return p;
}

OptimizerConfig Config::optimizer() const {
    OptimizerConfig c;
    c.mu = {number("optimizer.mu_lo"), number("optimizer.mu_hi")};
    c.nu = {number("optimizer.nu_lo"), number("optimizer.nu_hi")};
    c.omega_floor = number("optimizer.omega_floor");
    c.search.seeds_per_variable = integer("optimizer.seeds_per_variable");
    c.search.max_starts = integer("optimizer.max_starts");
    c.search.shrink = number("optimizer.shrink");
    c.search.rel_step_tol = number("optimizer.rel_step_tol");
    c.search.screen_step_tol = number("optimizer.screen_step_tol");
    c.search.max_evaluations = integer("optimizer.max_evaluations");
    const std::string& sp = text("rate.single_photon_model");
    if (sp == "closed-form")
        c.asymptotic.single_photon = SinglePhotonModel::ClosedForm;
    else if (sp == "engine-extraction")
        c.asymptotic.single_photon = SinglePhotonModel::EngineExtraction;
    else
        bad_value("rate.single_photon_model", sp, "closed-form or engine-extraction");
    if (!(c.mu.lo > 0.0 && c.mu.lo < c.mu.hi && c.nu.lo > 0.0 && c.nu.lo < c.nu.hi))
        throw ConfigError("optimizer bounds must satisfy 0 < lo < hi");
    if (!(c.omega_floor >= 0.0)) throw ConfigError("optimizer.omega_floor must be >= 0");
    if (c.search.seeds_per_variable < 1 || c.search.max_starts < 1 || c.search.max_evaluations < 1)
        throw ConfigError("optimizer seed and evaluation counts must be >= 1");
    if (!(c.search.shrink > 0.0 && c.search.shrink < 1.0)) throw ConfigError("optimizer.shrink must lie in (0,1)");
    if (!(c.search.rel_step_tol > 0.0)) throw ConfigError("optimizer.rel_step_tol must be > 0");
    return c;
}

IntensitySettings Config::intensities() const {
    IntensitySettings s;
    s.alice = {number("intensities.mu_a"), number("intensities.nu_a"), number("intensities.omega_a")};
    s.bob = {number("intensities.mu_b"), number("intensities.nu_b"), number("intensities.omega_b")};
    try {
        validate_intensities(s);
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("invalid intensities: ") + e.what());
    }
    return s;
}

ChannelGeometry Config::geometry() const {
    try {
        return ChannelGeometry::from_lengths(number("channel.l_ac_km"), number("channel.l_bc_km"),
                                             number("system.alpha_db_per_km"));
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("invalid channel: ") + e.what());
    }
}

RateMode Config::rate_mode() const {
    const std::string& m = text("rate.mode");
    if (m == "asymptotic") return RateMode::AsymptoticTruth;
    if (m == "two-decoy") return RateMode::TwoDecoyBounds;
    bad_value("rate.mode", m, "asymptotic or two-decoy");
}

IntensityConstraint Config::constraint() const {
    const std::string& m = text("optimizer.constraint");
    if (m == "free") return IntensityConstraint::Free;
    if (m == "party-symmetric") return IntensityConstraint::PartySymmetric;
    if (m == "arrival-matched") return IntensityConstraint::ArrivalMatched;
    bad_value("optimizer.constraint", m, "free, party-symmetric or arrival-matched");
}

std::string format_config(const Config& c) {
    std::string out;
    for (const auto& [k, v] : c.entries()) out += k + " = " + v + "\n";
    return out;
}

}  // namespace mdiqkd
