#ifndef MDIQKD_KEYRATE_HPP
#define MDIQKD_KEYRATE_HPP

#include "mdiqkd/decoy.hpp"
#include "mdiqkd/params.hpp"

namespace mdiqkd {

// H2(x) with H2(0) = H2(1) = 0. Throws ValidationError outside [0,1].
double binary_entropy(double x);

enum class RateMode { AsymptoticTruth, TwoDecoyBounds };

const char* rate_mode_name(RateMode m);

struct KeyRateReport {
    double rate = 0.0;  // max(0, single_photon_term - ec_term)
    double single_photon_term = 0.0;
    double ec_term = 0.0;
    double p11_z = 0.0;
    double y11_z = 0.0;
    double e11_x = 0.0;
    double q_z = 0.0;
    double e_z = 0.0;
    IntensitySettings intensities{};  // only mu is meaningful in asymptotic mode
    double l_ac_km = 0.0;
    double l_bc_km = 0.0;
    RateMode mode = RateMode::AsymptoticTruth;
};

// Where Q_Z, E_Z come from.
enum class GainModel {
    Auto,        // closed form when the parameters are the two-rotation reduction, else engine
    Engine,
    ClosedForm,  // Bessel forms with e_d1 = e_d / 2; ignores e_m and the misalignment mode
};

// Where Y11 and e11 come from.
enum class SinglePhotonModel {
    ClosedForm,        // y11_e11_true
    EngineExtraction,  // mixed derivative of the engine gains at zero intensity
};

struct AsymptoticOptions {
    GainModel gains = GainModel::Auto;
    SinglePhotonModel single_photon = SinglePhotonModel::ClosedForm;
};

// True when params describe exactly the two-rotation reduction with e_m = 0,
// where the closed forms coincide with the engine.
bool closed_form_applies(const SystemParams& params);

KeyRateReport asymptotic_rate(double mu_a, double mu_b, const ChannelGeometry& geometry, const SystemParams& params,
                              const AsymptoticOptions& opts = {});

// Rate from Y11 / e11 / Q_Z / E_Z values. e11 above 1/2 is treated as 1/2.
KeyRateReport assemble_rate(double mu_a, double mu_b, double y11_z, double e11_x, double q_z, double e_z,
                            double f_e);

// Two-decoy rate from a gain table. This is the hook for externally
// measured or fluctuation-adjusted tables.
KeyRateReport two_decoy_rate_from_table(const GainTable& table, const IntensitySettings& settings,
                                        const SystemParams& params);

KeyRateReport two_decoy_rate(const IntensitySettings& settings, const ChannelGeometry& geometry,
                             const SystemParams& params);

struct ExtractedSinglePhoton {
    double y11_z = 0.0;
    double y11_x = 0.0;
    double e11_x = 0.0;
};

// Infinite-decoy single-photon quantities read off the engine: the mixed
// derivative d2/(dmu_a dmu_b) of e^{mu_a+mu_b} Q (and of e^{mu_a+mu_b} EQ) at
// zero, by finite differences with Richardson extrapolation.
ExtractedSinglePhoton extract_single_photon(const ChannelGeometry& geometry, const SystemParams& params,
                                            double step = 0.04);

}  // namespace mdiqkd

#endif  // MDIQKD_KEYRATE_HPP
