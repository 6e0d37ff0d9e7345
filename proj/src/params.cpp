#include "mdiqkd/params.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "mdiqkd/error.hpp"

namespace mdiqkd {

namespace {

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << name << " must lie in [0,1], got " << v;
        throw ValidationError(os.str());
    }
}

double sin2(double theta) {
    double s = std::sin(theta);
    return s * s;
}

}  // namespace

double SystemParams::e1() const {
    if (misalignment_mode == MisalignmentMode::FixedAngles) return sin2(fixed_angles.theta1);
    return split.alice * e_d;
}

double SystemParams::e2() const {
    if (misalignment_mode == MisalignmentMode::FixedAngles) return sin2(fixed_angles.theta2);
    return split.bob * e_d;
}

double SystemParams::e3() const {
    if (misalignment_mode == MisalignmentMode::FixedAngles) return sin2(fixed_angles.theta3);
    return split.measurement * e_d;
}

void SystemParams::validate() const {
    require_unit(eta_d, "eta_d");
    require_unit(y0, "y0");
    require_unit(e_d, "e_d");
    require_unit(e_m, "e_m");
    require_unit(split.alice, "split.alice");
    require_unit(split.bob, "split.bob");
    require_unit(split.measurement, "split.measurement");
    if (!(f_e >= 1.0)) throw ValidationError("f_e must be >= 1");
    if (!(alpha_db_per_km > 0.0)) throw ValidationError("alpha_db_per_km must be > 0");
    if (quadrature_points < 16 || quadrature_points % 2 != 0)
        throw ValidationError("quadrature_points must be even and >= 16");
    if (mc_samples < 1) throw ValidationError("mc_samples must be >= 1");
    if (threads < 1) throw ValidationError("threads must be >= 1");
    double sum = e1() + e2() + e3();
    if (std::abs(sum - e_d) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "misalignment split e1+e2+e3 = " << sum << " does not match e_d = " << e_d;
        throw ValidationError(os.str());
    }
}

SystemParams SystemParams::practical() { return SystemParams{}; }

SystemParams SystemParams::with_symmetric_fixed_misalignment(double total_e_d) const {
    require_unit(total_e_d, "e_d");
    SystemParams p = *this;
    p.e_d = total_e_d;
    p.misalignment_mode = MisalignmentMode::FixedAngles;
    double th = std::asin(std::sqrt(total_e_d / 2.0));
    p.fixed_angles = {th, th, 0.0};
    return p;
}

double transmittance_from_distance(double l_km, double alpha_db_per_km) {
    if (!(l_km >= 0.0)) throw ValidationError("distance must be >= 0");
    if (!(alpha_db_per_km > 0.0)) throw ValidationError("alpha_db_per_km must be > 0");
    return std::pow(10.0, -alpha_db_per_km * l_km / 10.0);
}

double channel_ratio(double t_a, double t_b) {
    if (!(t_a > 0.0 && t_a <= 1.0)) throw ValidationError("t_a must lie in (0,1]");
    if (!(t_b > 0.0 && t_b <= 1.0)) throw ValidationError("t_b must lie in (0,1]");
    return t_a / t_b;
}

ChannelGeometry ChannelGeometry::from_lengths(double l_ac_km, double l_bc_km, double alpha_db_per_km) {
    double t_a = transmittance_from_distance(l_ac_km, alpha_db_per_km);
    double t_b = transmittance_from_distance(l_bc_km, alpha_db_per_km);
    return ChannelGeometry(l_ac_km, l_bc_km, t_a, t_b);
}

ChannelGeometry ChannelGeometry::from_transmittances(double t_a, double t_b, double alpha_db_per_km) {
    channel_ratio(t_a, t_b);  // range check
    if (!(alpha_db_per_km > 0.0)) throw ValidationError("alpha_db_per_km must be > 0");
    // + 0.0 turns the -0 of a unit transmittance into 0
    double l_ac = -10.0 * std::log10(t_a) / alpha_db_per_km + 0.0;
    double l_bc = -10.0 * std::log10(t_b) / alpha_db_per_km + 0.0;
    return ChannelGeometry(l_ac, l_bc, t_a, t_b);
}

ChannelGeometry ChannelGeometry::from_ratio(double x, double l_bc_km, double alpha_db_per_km) {
    double t_b = transmittance_from_distance(l_bc_km, alpha_db_per_km);
    if (!(x > 0.0)) throw ValidationError("x must be > 0");
    double t_a = x * t_b;
    if (t_a > 1.0) throw ValidationError("x * t_b exceeds 1; choose a longer L_bc");
    double l_ac = -10.0 * std::log10(t_a) / alpha_db_per_km + 0.0;
    return ChannelGeometry(l_ac, l_bc_km, t_a, t_b);
}

ChannelGeometry ChannelGeometry::symmetric(double total_km, double alpha_db_per_km) {
    return from_lengths(total_km / 2.0, total_km / 2.0, alpha_db_per_km);
}

namespace {

void check_party(const PartyIntensities& p, const char* who) {
    auto fail = [&](const char* what, double a, double b, bool equal) {
        std::ostringstream os;
        os << who << ": " << what << " (" << a << ", " << b << ")";
        if (equal) throw DegenerateIntensityError(os.str());
        throw ValidationError(os.str());
    };
    if (!(p.omega >= 0.0)) fail("omega must be >= 0", p.omega, 0.0, false);
    if (p.mu == p.nu) fail("mu equals nu", p.mu, p.nu, true);
    if (p.nu == p.omega) fail("nu equals omega", p.nu, p.omega, true);
    if (!(p.mu > p.nu)) fail("mu must exceed nu", p.mu, p.nu, false);
    if (!(p.nu > p.omega)) fail("nu must exceed omega", p.nu, p.omega, false);
}

}  // namespace

void validate_intensities(const IntensitySettings& s) {
    check_party(s.alice, "alice");
    check_party(s.bob, "bob");
}

}  // namespace mdiqkd
