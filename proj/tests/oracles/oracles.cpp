#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracle {

double h2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double i0(double x) { return std::cyl_bessel_i(0.0, x); }

namespace {

// 2 e^{-g/2} (1-y0)^2 [ I(big) + k^2 e^{-g/2} - k e^{-s/2} I(l1) - k e^{-(g-s)/2} I(l2) ]
double bracket(double g, double y0, double big, double s, double l1, double l2) {
    double k = 1.0 - y0;
    return 2.0 * std::exp(-g / 2.0) * k * k *
           (big + k * k * std::exp(-g / 2.0) - k * std::exp(-s / 2.0) * l1 - k * std::exp(-(g - s) / 2.0) * l2);
}

Bell swap(Bell b) { return {b.singlet, b.triplet}; }

double click(double intensity, double y0) { return 1.0 - (1.0 - y0) * std::exp(-intensity); }

// midpoint rule over [0, 2pi); ch, cv, dh, dv as functions of cos(phi)
template <class F>
Bell integrate(F intensities, double y0, int nodes) {
    double t = 0.0, s = 0.0;
    for (int k = 0; k < nodes; ++k) {
        double phi = 2.0 * std::numbers::pi * (k + 0.5) / nodes;
        double i[4];
        intensities(std::cos(phi), i);
        double ch = click(i[0], y0), cv = click(i[1], y0), dh = click(i[2], y0), dv = click(i[3], y0);
        t += ch * cv * (1 - dh) * (1 - dv) + dh * dv * (1 - ch) * (1 - cv);
        s += ch * dv * (1 - cv) * (1 - dh) + cv * dh * (1 - ch) * (1 - dv);
    }
    return {t / nodes, s / nodes};
}

}  // namespace

Bell hh_bessel(double ga, double gb, double ed1, double y0, bool same_sign) {
    double beta = ga * gb, g = ga * ga + gb * gb;
    double l1 = i0(ed1 * beta), l2 = i0(beta - ed1 * beta);
    // s = g (1 - ed1): the two tails are e^{-g(1-ed1)/2} I0(ed1 beta) and e^{-g ed1/2} I0(beta - ed1 beta)
    Bell b{bracket(g, y0, i0(beta), g * (1.0 - ed1), l1, l2),
           bracket(g, y0, i0(beta - 2.0 * beta * ed1), g * (1.0 - ed1), l1, l2)};
    return same_sign ? b : swap(b);
}

Bell hv_bessel(double ga, double gb, double ed1, double y0, bool same_sign) {
    double g = ga * ga + gb * gb;
    double lam = ga * gb * std::sqrt(ed1 * (1.0 - ed1));
    double w = ga * ga + ed1 * (gb * gb - ga * ga);
    Bell b{bracket(g, y0, i0(2.0 * lam), w, i0(lam), i0(lam)), bracket(g, y0, 1.0, w, i0(lam), i0(lam))};
    return same_sign ? swap(b) : b;
}

Bell hh_numeric(double ga, double gb, double ed1, double y0, bool same_sign, int nodes) {
    double g = ga * ga + gb * gb, b = ga * gb;
    Bell r = integrate(
        [&](double c, double* i) {
            i[0] = ((1 - ed1) * g - 2 * b * c * (1 - ed1)) / 2;  // ch
            i[1] = (ed1 * g - 2 * b * c * ed1) / 2;              // cv
            i[2] = ((1 - ed1) * g + 2 * b * c * (1 - ed1)) / 2;  // dh
            i[3] = (ed1 * g + 2 * b * c * ed1) / 2;              // dv
        },
        y0, nodes);
    return same_sign ? r : swap(r);
}

Bell hv_numeric(double ga, double gb, double ed1, double y0, bool same_sign, int nodes) {
    double lam = ga * gb * std::sqrt(ed1 * (1 - ed1));
    double a2 = ga * ga, b2 = gb * gb;
    Bell r = integrate(
        [&](double c, double* i) {
            i[0] = ((1 - ed1) * a2 + ed1 * b2 - 2 * lam * c) / 2;
            i[1] = (ed1 * a2 + (1 - ed1) * b2 - 2 * lam * c) / 2;
            i[2] = ((1 - ed1) * a2 + ed1 * b2 + 2 * lam * c) / 2;
            i[3] = (ed1 * a2 + (1 - ed1) * b2 + 2 * lam * c) / 2;
        },
        y0, nodes);
    return same_sign ? swap(r) : r;
}

double y11(double ta, double tb, double y0) {
    double k = (1 - y0) * (1 - y0);
    return k * (4 * y0 * y0 * (1 - ta) * (1 - tb) + 2 * y0 * (ta + tb - 1.5 * ta * tb) + ta * tb / 2);
}

double e11(double ta, double tb, double y0, double e_d, double e_m) {
    double y = y11(ta, tb, y0);
    return 0.5 - ta * tb * (1 - e_d) * (1 - e_d) * (1 - e_m) * (1 - y0) * (1 - y0) / (4 * y);
}

Argmax dense_argmax_log(const std::function<double(double)>& f, double lo, double hi, int points) {
    Argmax best{lo, f(lo)};
    for (int k = 1; k < points; ++k) {
        double x = lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
        double v = f(x);
        if (v > best.value) best = {x, v};
    }
    return best;
}

}  // namespace oracle
