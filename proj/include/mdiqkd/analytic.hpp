#ifndef MDIQKD_ANALYTIC_HPP
#define MDIQKD_ANALYTIC_HPP

#include "mdiqkd/params.hpp"

namespace mdiqkd {

// Modified Bessel function of the first kind, order 0 (even power series).
double bessel_i0(double x);

struct SinglePhotonTruth {
    double y11_z = 0.0;
    double y11_x = 0.0;  // equal to y11_z
    double e11_x = 0.0;
};

// Infinite-decoy single-photon yield and X-basis error. The interference
// visibility (1 - e_d)^2 is further scaled by (1 - e_m) so the result stays
// exact for the mode-mismatch model; e_m = 0 gives the usual expression.
SinglePhotonTruth y11_e11_true(const ChannelGeometry& geometry, const SystemParams& params);

// Physical sign of theta1 * theta2.
enum class AngleSign { Same, Opposite };

struct BellPair {
    double triplet = 0.0;
    double singlet = 0.0;

    double total() const { return triplet + singlet; }
};

// Phase-averaged HH coincidences for the two-rotation reduction
// (theta1 = +-theta2 = asin(sqrt(e_d1)), U3 = I).
BellPair qz_hh_closed_form(double gamma_a, double gamma_b, double e_d1, double y0, AngleSign sign);

// Phase-averaged HV coincidences. With the rotation convention of the engine
// the I0(2 lambda) term belongs to the triplet only when the rotations are
// opposite; for same-direction rotations it moves to the singlet.
BellPair qz_hv_closed_form(double gamma_a, double gamma_b, double e_d1, double y0, AngleSign sign);

struct QzEz {
    double q_z = 0.0;
    double e_z = 0.0;
};

// Full Bessel-form Q_Z and E_Z from amplitudes. Throws NumericalError when
// there are no coincidences at all.
QzEz qz_ez_from_amplitudes(double gamma_a, double gamma_b, double e_d1, double y0);

// Full Bessel-form Q_Z, E_Z for intensities and geometry, using the
// two-rotation reduction e_d1 = e_d / 2.
QzEz qz_ez_closed_form(double mu_a, double mu_b, const ChannelGeometry& geometry, const SystemParams& params);

// Background-free second-order expansion in terms of the total e_d.
QzEz second_order_from_amplitudes(double gamma_a, double gamma_b, double e_d);
QzEz second_order_qz_ez(double mu_a, double mu_b, const ChannelGeometry& geometry, const SystemParams& params);

// The same expansion written with t_a = x * t_b.
QzEz second_order_qz_ez_x(double x, double mu_a, double mu_b, double t_b, const SystemParams& params);

// Key-rate kernel at fixed x (background counts ignored).
double g_function(double x, double mu_a, double mu_b, const SystemParams& params);

// Estimated rate t_b^2 eta_d^2 G / 2, floored at 0.
double r_est(const ChannelGeometry& geometry, double mu_a, double mu_b, const SystemParams& params);

}  // namespace mdiqkd

#endif  // MDIQKD_ANALYTIC_HPP
