#ifndef MDIQKD_PARAMS_HPP
#define MDIQKD_PARAMS_HPP

#include <cstdint>

namespace mdiqkd {

// Polarization rotation angles (radians) of Alice's channel, Bob's channel
// and the measurement-side PBS relative to the reference PBS.
struct RotationAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;
};

enum class MisalignmentMode {
    FixedAngles,  // use SystemParams::fixed_angles for every pulse
    GaussianMC,   // draw theta_k ~ N(0, asin(sqrt(e_k))) per Monte-Carlo sample
};

// Fractions of the total misalignment e_d assigned to U1, U2, U3.
struct MisalignmentSplit {
    double alice = 0.475;
    double bob = 0.475;
    double measurement = 0.05;
};

struct SystemParams {
    double eta_d = 0.145;            // detector efficiency
    double y0 = 6.02e-6;             // background count probability per detector per pulse
    double f_e = 1.16;               // error-correction inefficiency
    double alpha_db_per_km = 0.2;    // fibre attenuation
    double e_d = 0.015;              // total polarization misalignment
    double e_m = 0.02;               // total mode mismatch
    MisalignmentSplit split{};
    MisalignmentMode misalignment_mode = MisalignmentMode::GaussianMC;
    RotationAngles fixed_angles{};   // only read in FixedAngles mode
    int quadrature_points = 128;
    int mc_samples = 2000;
    std::uint64_t rng_seed = 1;
    int threads = 1;

    // Per-operator misalignment e_k. In FixedAngles mode these are
    // sin^2(theta_k); otherwise split fractions times e_d.
    double e1() const;
    double e2() const;
    double e3() const;

    // Throws ValidationError on any violated invariant.
    void validate() const;

    // Representative practical parameters used by every default scenario.
    static SystemParams practical();

    // Two-operator reduction: U3 = I, theta1 = theta2 = asin(sqrt(e_d / 2)),
    // so e1 + e2 = e_d exactly. Switches to FixedAngles mode.
    SystemParams with_symmetric_fixed_misalignment(double total_e_d) const;
};

// Fibre-link transmittance 10^(-alpha L / 10).
double transmittance_from_distance(double l_km, double alpha_db_per_km);

// t_a / t_b.
double channel_ratio(double t_a, double t_b);

class ChannelGeometry {
public:
    static ChannelGeometry from_lengths(double l_ac_km, double l_bc_km, double alpha_db_per_km);
    // Lengths are back-computed from the transmittances.
    static ChannelGeometry from_transmittances(double t_a, double t_b, double alpha_db_per_km);
    // Keeps l_bc_km exactly; t_a = x t_b must not exceed 1.
    static ChannelGeometry from_ratio(double x, double l_bc_km, double alpha_db_per_km);
    static ChannelGeometry symmetric(double total_km, double alpha_db_per_km);

    double l_ac_km() const { return l_ac_km_; }
    double l_bc_km() const { return l_bc_km_; }
    double t_a() const { return t_a_; }
    double t_b() const { return t_b_; }
    double x() const { return t_a_ / t_b_; }

private:
    ChannelGeometry(double l_ac, double l_bc, double t_a, double t_b)
        : l_ac_km_(l_ac), l_bc_km_(l_bc), t_a_(t_a), t_b_(t_b) {}

    double l_ac_km_;
    double l_bc_km_;
    double t_a_;
    double t_b_;
};

struct PartyIntensities {
    double mu = 0.0;
    double nu = 0.0;
    double omega = 0.0;
};

struct IntensitySettings {
    PartyIntensities alice;
    PartyIntensities bob;

    static IntensitySettings both(double mu, double nu, double omega) {
        return {{mu, nu, omega}, {mu, nu, omega}};
    }
};

// Accepts iff mu > nu > omega >= 0 for both parties; otherwise throws a
// ValidationError naming the party and the offending pair.
void validate_intensities(const IntensitySettings& s);

}  // namespace mdiqkd

#endif  // MDIQKD_PARAMS_HPP
