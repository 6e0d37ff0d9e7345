#ifndef MDIQKD_TEST_ORACLES_HPP
#define MDIQKD_TEST_ORACLES_HPP

// Test-side reference implementations. Written straight from the textbook
// formulas, sharing no code with the library, so agreement means something.

#include <functional>

namespace oracle {

double h2(double x);

// Modified Bessel I0 from the standard library special functions.
double i0(double x);

struct Bell {
    double triplet = 0.0;
    double singlet = 0.0;
};

// Bessel forms of the HH / HV coincidence gains of the two-rotation model.
// The standard HH form belongs to same-direction rotations; the standard HV
// form to opposite-direction rotations (see the engine's sign convention).
Bell hh_bessel(double ga, double gb, double ed1, double y0, bool same_sign);
Bell hv_bessel(double ga, double gb, double ed1, double y0, bool same_sign);

// The same quantities by brute-force midpoint integration over the phase of
// the four two-rotation detector intensities.
Bell hh_numeric(double ga, double gb, double ed1, double y0, bool same_sign, int nodes);
Bell hv_numeric(double ga, double gb, double ed1, double y0, bool same_sign, int nodes);

// Infinite-decoy single-photon yield and error (mode mismatch optional).
double y11(double ta_eta, double tb_eta, double y0);
double e11(double ta_eta, double tb_eta, double y0, double e_d, double e_m);

struct Argmax {
    double x = 0.0;
    double value = 0.0;
};

// Dense log-spaced grid scan of f on [lo, hi].
Argmax dense_argmax_log(const std::function<double(double)>& f, double lo, double hi, int points);

}  // namespace oracle

#endif
