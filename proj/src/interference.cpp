#include "mdiqkd/interference.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "mdiqkd/counter_rng.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/numeric.hpp"

namespace mdiqkd {

const char* basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

namespace {

struct Vec2 {
    double h;
    double v;
};

Vec2 rotate(double theta, Vec2 x) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c * x.h - s * x.v, s * x.h + c * x.v};
}

Vec2 polarization(Basis basis, int bit) {
    if (basis == Basis::Z) return bit == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    const double r = std::numbers::sqrt2 / 2.0;
    return bit == 0 ? Vec2{r, r} : Vec2{r, -r};
}

// Each detector sees base + amp * cos(phi).
struct IntensityModel {
    double base[4];
    double amp[4];
};

IntensityModel intensity_model(const EncodingPair& pair, const RotationAngles& ang, double gamma_a,
                               double gamma_b, double e_m) {
    Vec2 sa = rotate(ang.theta1, polarization(pair.basis, pair.alice_bit));
    Vec2 sb = rotate(ang.theta2, polarization(pair.basis, pair.bob_bit));
    Vec2 a{gamma_a * sa.h, gamma_a * sa.v};
    Vec2 b{gamma_b * sb.h, gamma_b * sb.v};
    Vec2 a3 = rotate(ang.theta3, a);
    Vec2 b3 = rotate(ang.theta3, b);
    double m = std::sqrt(1.0 - e_m);
    // order: ch, cv, dh, dv. Matched + unmatched parts of Bob sum to b^2.
    IntensityModel im{};
    im.base[0] = 0.5 * (a3.h * a3.h + b3.h * b3.h);
    im.base[1] = 0.5 * (a3.v * a3.v + b3.v * b3.v);
    im.base[2] = 0.5 * (a.h * a.h + b.h * b.h);
    im.base[3] = 0.5 * (a.v * a.v + b.v * b.v);
    im.amp[0] = -m * a3.h * b3.h;
    im.amp[1] = -m * a3.v * b3.v;
    im.amp[2] = m * a.h * b.h;
    im.amp[3] = m * a.v * b.v;
    return im;
}

// Intensities depend on phi only through cos(phi), so the N-node periodic
// trapezoid folds onto nodes 0..N/2 with weights (1, 2, ..., 2, 1) / N.
struct PhaseGrid {
    std::vector<double> cosphi;
    std::vector<double> weight;
};

PhaseGrid phase_grid(int n) {
    if (n < 16 || n % 2 != 0) throw ValidationError("quadrature_points must be even and >= 16");
    PhaseGrid g;
    int half = n / 2;
    g.cosphi.resize(half + 1);
    g.weight.resize(half + 1);
    for (int k = 0; k <= half; ++k) {
        g.cosphi[k] = std::cos(2.0 * std::numbers::pi * k / n);
        g.weight[k] = (k == 0 || k == half) ? 1.0 / n : 2.0 / n;
    }
    return g;
}

struct TripletSinglet {
    double triplet;
    double singlet;
};

TripletSinglet average_over_phase(const IntensityModel& im, double y0, const PhaseGrid& g) {
    double trip = 0.0, sing = 0.0;
    const double keep = 1.0 - y0;
    for (std::size_t k = 0; k < g.cosphi.size(); ++k) {
        double p[4], q[4];
        for (int j = 0; j < 4; ++j) {
            double intensity = im.base[j] + im.amp[j] * g.cosphi[k];
            if (intensity < 0.0) intensity = 0.0;  // rounding at perfect destructive interference
            double em1 = std::expm1(-intensity);
            double e = 1.0 + em1;
            p[j] = -em1 + y0 * e;
            q[j] = keep * e;
        }
        double t = p[0] * p[1] * q[2] * q[3] + p[2] * p[3] * q[0] * q[1];
        double s = p[0] * p[3] * q[1] * q[2] + p[1] * p[2] * q[0] * q[3];
        trip += g.weight[k] * t;
        sing += g.weight[k] * s;
    }
    return {trip, sing};
}

void set_error_flags(CoincidenceResult& r, const EncodingPair& pair) {
    bool same = pair.alice_bit == pair.bob_bit;
    if (pair.basis == Basis::Z) {
        r.is_error_triplet = same;
        r.is_error_singlet = same;
    } else {
        r.is_error_triplet = !same;
        r.is_error_singlet = same;
    }
}

CoincidenceResult coincidence_on_grid(const EncodingPair& pair, const RotationAngles& angles, double gamma_a,
                                      double gamma_b, double e_m, double y0, const PhaseGrid& g) {
    TripletSinglet ts = average_over_phase(intensity_model(pair, angles, gamma_a, gamma_b, e_m), y0, g);
    CoincidenceResult r;
    r.q_triplet = ts.triplet;
    r.q_singlet = ts.singlet;
    set_error_flags(r, pair);
    return r;
}

}  // namespace

DetectorIntensities detector_intensities(const EncodingPair& pair, const RotationAngles& angles, double phi,
                                         double gamma_a, double gamma_b, double e_m) {
    IntensityModel im = intensity_model(pair, angles, gamma_a, gamma_b, e_m);
    double c = std::cos(phi);
    return {im.base[0] + im.amp[0] * c, im.base[1] + im.amp[1] * c, im.base[2] + im.amp[2] * c,
            im.base[3] + im.amp[3] * c};
}

double click_probability(double intensity, double y0) {
    return -std::expm1(-intensity) + y0 * std::exp(-intensity);
}

CoincidenceResult coincidence_gains(const EncodingPair& pair, const RotationAngles& angles, double gamma_a,
                                    double gamma_b, double e_m, double y0, int quadrature_points) {
    return coincidence_on_grid(pair, angles, gamma_a, gamma_b, e_m, y0, phase_grid(quadrature_points));
}

std::vector<RotationAngles> misalignment_samples(const SystemParams& params) {
    if (params.misalignment_mode == MisalignmentMode::FixedAngles) return {params.fixed_angles};
    double s1 = std::asin(std::sqrt(params.e1()));
    double s2 = std::asin(std::sqrt(params.e2()));
    double s3 = std::asin(std::sqrt(params.e3()));
    // every draw would be the identity
    if (s1 == 0.0 && s2 == 0.0 && s3 == 0.0) return {RotationAngles{}};
    std::vector<RotationAngles> out(static_cast<std::size_t>(params.mc_samples));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].theta1 = s1 * counter_normal(params.rng_seed, i, 0);
        out[i].theta2 = s2 * counter_normal(params.rng_seed, i, 1);
        out[i].theta3 = s3 * counter_normal(params.rng_seed, i, 2);
    }
    return out;
}

GainQber gain_and_qber_amplitudes(Basis basis, double gamma_a, double gamma_b, const SystemParams& params,
                                  const std::vector<RotationAngles>& samples) {
    if (samples.empty()) throw ValidationError("no misalignment samples");
    PhaseGrid grid = phase_grid(params.quadrature_points);
    const std::size_t n = samples.size();
    std::vector<double> q(n), eq(n);

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double qi = 0.0, ei = 0.0;
            for (int ab = 0; ab < 2; ++ab) {
                for (int bb = 0; bb < 2; ++bb) {
                    CoincidenceResult r =
                        coincidence_on_grid({basis, ab, bb}, samples[i], gamma_a, gamma_b, params.e_m, params.y0, grid);
                    qi += r.q_total();
                    ei += r.q_error();
                }
            }
            q[i] = qi;
            eq[i] = ei;
        }
    };

    std::size_t nthreads = static_cast<std::size_t>(params.threads);
    if (nthreads <= 1 || n < 64) {
        work(0, n);
    } else {
        if (nthreads > n) nthreads = n;
        std::vector<std::thread> pool;
        std::size_t chunk = (n + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // fixed-shape reduction, independent of thread count
    double norm = 4.0 * static_cast<double>(n);
    GainQber out;
    out.gain = pairwise_sum(q) / norm;
    out.error_gain = pairwise_sum(eq) / norm;
    out.qber = out.gain > 0.0 ? out.error_gain / out.gain : 0.0;
    return out;
}

GainQber gain_and_qber(Basis basis, double mu_a, double mu_b, const ChannelGeometry& geometry,
                       const SystemParams& params) {
    params.validate();
    if (!(mu_a >= 0.0 && mu_b >= 0.0)) throw ValidationError("intensities must be >= 0");
    double ga = std::sqrt(mu_a * geometry.t_a() * params.eta_d);
    double gb = std::sqrt(mu_b * geometry.t_b() * params.eta_d);
    return gain_and_qber_amplitudes(basis, ga, gb, params, misalignment_samples(params));
}

}  // namespace mdiqkd
