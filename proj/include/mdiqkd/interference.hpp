#ifndef MDIQKD_INTERFERENCE_HPP
#define MDIQKD_INTERFERENCE_HPP

#include <vector>

#include "mdiqkd/params.hpp"

namespace mdiqkd {

enum class Basis { Z = 0, X = 1 };

const char* basis_name(Basis b);

// Z: 0 = H, 1 = V.  X: 0 = +45, 1 = -45.
struct EncodingPair {
    Basis basis = Basis::Z;
    int alice_bit = 0;
    int bob_bit = 0;
};

// Mean photon numbers reaching Charles's four detectors (eta_d folded in).
struct DetectorIntensities {
    double ch = 0.0;
    double cv = 0.0;
    double dh = 0.0;
    double dv = 0.0;

    double total() const { return ch + cv + dh + dv; }
};

// Alice's and Bob's pulses with amplitudes gamma_a, gamma_b are rotated by
// U(theta1), U(theta2), combined on the 50:50 BS as c = (a - b)/sqrt2 and
// d = (a + b)/sqrt2, and the c arm passes U(theta3) before its PBS. A
// fraction e_m of Bob's intensity sits in an orthogonal mode and adds
// without interference.
DetectorIntensities detector_intensities(const EncodingPair& pair, const RotationAngles& angles, double phi,
                                         double gamma_a, double gamma_b, double e_m);

// Threshold detector: 1 - (1 - y0) exp(-intensity).
double click_probability(double intensity, double y0);

struct CoincidenceResult {
    double q_triplet = 0.0;  // {ch & cv} or {dh & dv}
    double q_singlet = 0.0;  // {ch & dv} or {cv & dh}
    bool is_error_triplet = false;
    bool is_error_singlet = false;

    double q_total() const { return q_triplet + q_singlet; }
    double q_error() const {
        return (is_error_triplet ? q_triplet : 0.0) + (is_error_singlet ? q_singlet : 0.0);
    }
};

// Phase-averaged (trapezoid over [0, 2pi)) Bell-outcome probabilities for one
// encoding pair and one set of rotation angles.
CoincidenceResult coincidence_gains(const EncodingPair& pair, const RotationAngles& angles, double gamma_a,
                                    double gamma_b, double e_m, double y0, int quadrature_points);

struct GainQber {
    double gain = 0.0;
    double qber = 0.0;        // 0 when gain == 0
    double error_gain = 0.0;  // gain * qber, computed directly
};

// Rotation angles used for averaging: one entry in FixedAngles mode,
// mc_samples Gaussian draws otherwise (a single identity entry when e_d = 0).
std::vector<RotationAngles> misalignment_samples(const SystemParams& params);

// Basis gain and QBER averaged over the four encoding pairs and over the
// misalignment samples.
GainQber gain_and_qber(Basis basis, double mu_a, double mu_b, const ChannelGeometry& geometry,
                       const SystemParams& params);

// Same, with amplitudes already computed and samples supplied by the caller
// (lets table builders reuse one sample set).
GainQber gain_and_qber_amplitudes(Basis basis, double gamma_a, double gamma_b, const SystemParams& params,
                                  const std::vector<RotationAngles>& samples);

}  // namespace mdiqkd

#endif  // MDIQKD_INTERFERENCE_HPP
