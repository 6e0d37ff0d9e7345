#include "mdiqkd/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "mdiqkd/error.hpp"
#include "mdiqkd/keyrate.hpp"

namespace mdiqkd {

double bessel_i0(double x) {
    // sum_k (x^2/4)^k / (k!)^2
    double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

SinglePhotonTruth y11_e11_true(const ChannelGeometry& geometry, const SystemParams& params) {
    const double ta = geometry.t_a() * params.eta_d;
    const double tb = geometry.t_b() * params.eta_d;
    const double y0 = params.y0;
    const double keep2 = (1.0 - y0) * (1.0 - y0);
    SinglePhotonTruth r;
    r.y11_z = keep2 * (4.0 * y0 * y0 * (1.0 - ta) * (1.0 - tb) + 2.0 * y0 * (ta + tb - 1.5 * ta * tb) +
                       ta * tb / 2.0);
    r.y11_x = r.y11_z;
    if (r.y11_x <= 0.0) {
        r.e11_x = 0.5;
        return r;
    }
    const double vis = (1.0 - params.e_d) * (1.0 - params.e_d) * (1.0 - params.e_m);
    r.e11_x = 0.5 - ta * tb * vis * keep2 / (4.0 * r.y11_x);
    return r;
}

namespace {

struct Notation {
    double beta;   // gamma_a * gamma_b
    double gamma;  // gamma_a^2 + gamma_b^2
    double pre;    // 2 exp(-gamma/2) (1 - y0)^2
    double keep;   // 1 - y0
};

Notation notation(double ga, double gb, double y0) {
    Notation n;
    n.beta = ga * gb;
    n.gamma = ga * ga + gb * gb;
    n.keep = 1.0 - y0;
    n.pre = 2.0 * std::exp(-n.gamma / 2.0) * n.keep * n.keep;
    return n;
}

}  // namespace

BellPair qz_hh_closed_form(double gamma_a, double gamma_b, double e_d1, double y0, AngleSign sign) {
    Notation n = notation(gamma_a, gamma_b, y0);
    double tail = n.keep * n.keep * std::exp(-n.gamma / 2.0) -
                  n.keep * std::exp(-n.gamma * (1.0 - e_d1) / 2.0) * bessel_i0(e_d1 * n.beta) -
                  n.keep * std::exp(-n.gamma * e_d1 / 2.0) * bessel_i0(n.beta - e_d1 * n.beta);
    double larger = n.pre * (bessel_i0(n.beta) + tail);
    double smaller = n.pre * (bessel_i0(n.beta - 2.0 * n.beta * e_d1) + tail);
    if (sign == AngleSign::Same) return {larger, smaller};
    return {smaller, larger};
}

BellPair qz_hv_closed_form(double gamma_a, double gamma_b, double e_d1, double y0, AngleSign sign) {
    Notation n = notation(gamma_a, gamma_b, y0);
    double lambda = n.beta * std::sqrt(e_d1 * (1.0 - e_d1));
    double w = gamma_a * gamma_a + e_d1 * (gamma_b * gamma_b - gamma_a * gamma_a);
    double i0l = bessel_i0(lambda);
    double tail = n.keep * n.keep * std::exp(-n.gamma / 2.0) - n.keep * std::exp(-w / 2.0) * i0l -
                  n.keep * std::exp(-(n.gamma - w) / 2.0) * i0l;
    double larger = n.pre * (bessel_i0(2.0 * lambda) + tail);
    double smaller = n.pre * (1.0 + tail);
    if (sign == AngleSign::Opposite) return {larger, smaller};
    return {smaller, larger};
}

QzEz qz_ez_from_amplitudes(double gamma_a, double gamma_b, double e_d1, double y0) {
    double hh = qz_hh_closed_form(gamma_a, gamma_b, e_d1, y0, AngleSign::Same).total();
    double hv = qz_hv_closed_form(gamma_a, gamma_b, e_d1, y0, AngleSign::Same).total();
    if (!(hh + hv > 0.0)) throw NumericalError("no coincidences");
    return {(hh + hv) / 2.0, hh / (hh + hv)};
}

QzEz qz_ez_closed_form(double mu_a, double mu_b, const ChannelGeometry& geometry, const SystemParams& params) {
    double ga = std::sqrt(mu_a * geometry.t_a() * params.eta_d);
    double gb = std::sqrt(mu_b * geometry.t_b() * params.eta_d);
    return qz_ez_from_amplitudes(ga, gb, params.e_d / 2.0, params.y0);
}

QzEz second_order_from_amplitudes(double gamma_a, double gamma_b, double e_d) {
    double beta = gamma_a * gamma_b;
    double g = gamma_a * gamma_a + gamma_b * gamma_b;
    double k = e_d * (1.0 - e_d / 2.0);
    QzEz r;
    r.q_z = (beta * beta + k * (g * g - 2.0 * beta * beta)) / 2.0;
    r.e_z = r.q_z > 0.0 ? g * g * k / (4.0 * r.q_z) : 0.0;
    return r;
}

QzEz second_order_qz_ez(double mu_a, double mu_b, const ChannelGeometry& geometry, const SystemParams& params) {
    double ga = std::sqrt(mu_a * geometry.t_a() * params.eta_d);
    double gb = std::sqrt(mu_b * geometry.t_b() * params.eta_d);
    return second_order_from_amplitudes(ga, gb, params.e_d);
}

QzEz second_order_qz_ez_x(double x, double mu_a, double mu_b, double t_b, const SystemParams& params) {
    const double k2 = 2.0 * params.e_d - params.e_d * params.e_d;
    const double bracket = 2.0 * x * mu_a * mu_b + (mu_b * mu_b + x * x * mu_a * mu_a) * k2;
    QzEz r;
    r.q_z = t_b * t_b * params.eta_d * params.eta_d * bracket / 4.0;
    r.e_z = bracket > 0.0 ? (mu_b + x * mu_a) * (mu_b + x * mu_a) * k2 / (2.0 * bracket) : 0.0;
    return r;
}

double g_function(double x, double mu_a, double mu_b, const SystemParams& params) {
    if (!(x > 0.0)) throw ValidationError("x must be > 0");
    const double ed = params.e_d;
    const double k2 = 2.0 * ed - ed * ed;
    const double bracket = 2.0 * x * mu_a * mu_b + (mu_b * mu_b + x * x * mu_a * mu_a) * k2;
    const double ez = bracket > 0.0 ? (mu_b + x * mu_a) * (mu_b + x * mu_a) * k2 / (2.0 * bracket) : 0.0;
    const double e11 = std::min(ed - ed * ed / 2.0, 0.5);
    return x * mu_a * mu_b * std::exp(-(mu_a + mu_b)) * (1.0 - binary_entropy(e11)) -
           bracket / 2.0 * params.f_e * binary_entropy(std::min(ez, 1.0));
}

double r_est(const ChannelGeometry& geometry, double mu_a, double mu_b, const SystemParams& params) {
    const double tb = geometry.t_b();
    double g = g_function(geometry.x(), mu_a, mu_b, params);
    return std::max(0.0, tb * tb * params.eta_d * params.eta_d / 2.0 * g);
}

}  // namespace mdiqkd
