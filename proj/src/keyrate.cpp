#include "mdiqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdiqkd/analytic.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/interference.hpp"

namespace mdiqkd {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream os;
        os << "binary_entropy argument must lie in [0,1], got " << x;
        throw ValidationError(os.str());
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

const char* rate_mode_name(RateMode m) {
    return m == RateMode::AsymptoticTruth ? "asymptotic" : "two-decoy";
}

bool closed_form_applies(const SystemParams& p) {
    if (p.misalignment_mode != MisalignmentMode::FixedAngles) return false;
    if (p.e_m != 0.0) return false;
    const RotationAngles& a = p.fixed_angles;
    if (a.theta3 != 0.0 || a.theta1 != a.theta2) return false;
    double s = std::sin(a.theta1);
    return std::abs(s * s - p.e_d / 2.0) < 1e-12;
}

KeyRateReport assemble_rate(double mu_a, double mu_b, double y11_z, double e11_x, double q_z, double e_z,
                            double f_e) {
    KeyRateReport r;
    r.p11_z = mu_a * mu_b * std::exp(-(mu_a + mu_b));
    r.y11_z = y11_z;
    r.e11_x = e11_x;
    r.q_z = q_z;
    r.e_z = e_z;
    r.intensities.alice.mu = mu_a;
    r.intensities.bob.mu = mu_b;
    double e11 = std::clamp(e11_x, 0.0, 0.5);
    r.single_photon_term = r.p11_z * y11_z * (1.0 - binary_entropy(e11));
    r.ec_term = q_z * f_e * binary_entropy(std::clamp(e_z, 0.0, 1.0));
    r.rate = std::max(0.0, r.single_photon_term - r.ec_term);
    return r;
}

KeyRateReport asymptotic_rate(double mu_a, double mu_b, const ChannelGeometry& geometry, const SystemParams& params,
                              const AsymptoticOptions& opts) {
    params.validate();
    if (!(mu_a >= 0.0 && mu_b >= 0.0)) throw ValidationError("intensities must be >= 0");

    bool closed = opts.gains == GainModel::ClosedForm ||
                  (opts.gains == GainModel::Auto && closed_form_applies(params));
    double q = 0.0, e = 0.0;
    if (closed) {
        try {
            QzEz c = qz_ez_closed_form(mu_a, mu_b, geometry, params);
            q = c.q_z;
            e = c.e_z;
        } catch (const NumericalError&) {
            // no coincidences: nothing to correct
        }
    } else {
        GainQber g = gain_and_qber(Basis::Z, mu_a, mu_b, geometry, params);
        q = g.gain;
        e = g.qber;
    }

    double y11 = 0.0, e11 = 0.0;
    if (opts.single_photon == SinglePhotonModel::ClosedForm) {
        SinglePhotonTruth t = y11_e11_true(geometry, params);
        y11 = t.y11_z;
        e11 = t.e11_x;
    } else {
        ExtractedSinglePhoton x = extract_single_photon(geometry, params);
        y11 = x.y11_z;
        e11 = x.e11_x;
    }

    KeyRateReport r = assemble_rate(mu_a, mu_b, y11, e11, q, e, params.f_e);
    r.l_ac_km = geometry.l_ac_km();
    r.l_bc_km = geometry.l_bc_km();
    r.mode = RateMode::AsymptoticTruth;
    return r;
}

KeyRateReport two_decoy_rate_from_table(const GainTable& table, const IntensitySettings& settings,
                                        const SystemParams& params) {
    validate_intensities(settings);
    DecoyBounds b = decoy_bounds(table, settings);
    const GainEntry& sig = table.at(Basis::Z, Level::Mu, Level::Mu);
    double e_z = sig.q > 0.0 ? sig.eq / sig.q : 0.0;
    double e11 = b.e11_bounded ? b.e11_x.value : 0.5;
    KeyRateReport r = assemble_rate(settings.alice.mu, settings.bob.mu, b.y11_z.value, e11, sig.q, e_z, params.f_e);
    r.intensities = settings;
    r.mode = RateMode::TwoDecoyBounds;
    return r;
}

KeyRateReport two_decoy_rate(const IntensitySettings& settings, const ChannelGeometry& geometry,
                             const SystemParams& params) {
    GainTable t = build_gain_table(settings, geometry, params);
    KeyRateReport r = two_decoy_rate_from_table(t, settings, params);
    r.l_ac_km = geometry.l_ac_km();
    r.l_bc_km = geometry.l_bc_km();
    return r;
}

ExtractedSinglePhoton extract_single_photon(const ChannelGeometry& geometry, const SystemParams& params,
                                            double step) {
    params.validate();
    if (!(step > 0.0)) throw ValidationError("step must be > 0");
    const auto samples = misalignment_samples(params);
    const double ka = geometry.t_a() * params.eta_d;
    const double kb = geometry.t_b() * params.eta_d;

    struct Triple {
        double qz, qx, eqx;
    };
    auto F = [&](double a, double b) {
        double ga = std::sqrt(a * ka), gb = std::sqrt(b * kb);
        GainQber z = gain_and_qber_amplitudes(Basis::Z, ga, gb, params, samples);
        GainQber x = gain_and_qber_amplitudes(Basis::X, ga, gb, params, samples);
        double w = std::exp(a + b);
        return Triple{w * z.gain, w * x.gain, w * x.error_gain};
    };
    const Triple f00 = F(0.0, 0.0);
    auto D = [&](double h) {
        Triple hh = F(h, h), h0 = F(h, 0.0), oh = F(0.0, h);
        double s = h * h;
        return Triple{(hh.qz - h0.qz - oh.qz + f00.qz) / s, (hh.qx - h0.qx - oh.qx + f00.qx) / s,
                      (hh.eqx - h0.eqx - oh.eqx + f00.eqx) / s};
    };

    // D(h) = Y11 + c1 h + c2 h^2 + ...; remove three orders.
    constexpr int kLevels = 4;
    Triple r[kLevels];
    for (int j = 0; j < kLevels; ++j) r[j] = D(step / std::pow(2.0, j));
    for (int k = 1; k < kLevels; ++k) {
        double f = std::pow(2.0, k);
        for (int j = 0; j + k < kLevels; ++j) {
            r[j].qz = (f * r[j + 1].qz - r[j].qz) / (f - 1.0);
            r[j].qx = (f * r[j + 1].qx - r[j].qx) / (f - 1.0);
            r[j].eqx = (f * r[j + 1].eqx - r[j].eqx) / (f - 1.0);
        }
    }
    ExtractedSinglePhoton out;
    out.y11_z = r[0].qz;
    out.y11_x = r[0].qx;
    out.e11_x = r[0].qx > 0.0 ? r[0].eqx / r[0].qx : 0.5;
    return out;
}

}  // namespace mdiqkd
