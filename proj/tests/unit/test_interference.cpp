#include <cmath>
#include <numbers>

#include "../oracles/oracles.hpp"
#include "doctest.h"
#include "mdiqkd/error.hpp"
#include "mdiqkd/interference.hpp"

using namespace mdiqkd;

namespace {

RotationAngles two_rotation(double ed1, bool same) {
    double th = std::asin(std::sqrt(ed1));
    return {th, same ? th : -th, 0.0};
}

}  // namespace

TEST_CASE("click probability") {
    CHECK(click_probability(0.0, 0.0) == 0.0);
    CHECK(click_probability(0.0, 3e-6) == doctest::Approx(3e-6));
    CHECK(click_probability(50.0, 0.0) == doctest::Approx(1.0));
    CHECK(click_probability(50.0, 0.2) == doctest::Approx(1.0));
    CHECK(click_probability(0.2, 1e-3) > click_probability(0.1, 1e-3));
    CHECK(click_probability(0.1, 2e-3) > click_probability(0.1, 1e-3));
}

TEST_CASE("detector intensities of the two-rotation HH case") {
    double ga = 0.2, gb = 0.15, ed1 = 0.03;
    for (double phi : {0.0, 0.7, 2.0, 3.1}) {
        DetectorIntensities d = detector_intensities({Basis::Z, 0, 0}, two_rotation(ed1, true), phi, ga, gb, 0.0);
        double g = ga * ga + gb * gb, b = ga * gb, c = std::cos(phi);
        CHECK(d.ch == doctest::Approx(((1 - ed1) * g - 2 * b * c * (1 - ed1)) / 2).epsilon(1e-12));
        CHECK(d.dh == doctest::Approx(((1 - ed1) * g + 2 * b * c * (1 - ed1)) / 2).epsilon(1e-12));
        CHECK(d.cv == doctest::Approx((ed1 * g - 2 * b * c * ed1) / 2).epsilon(1e-12));
        CHECK(d.dv == doctest::Approx((ed1 * g + 2 * b * c * ed1) / 2).epsilon(1e-12));
    }
    DetectorIntensities z = detector_intensities({Basis::Z, 0, 0}, {}, 0.0, 0.3, 0.3, 0.0);
    CHECK(std::abs(z.ch) < 1e-15);
}

TEST_CASE("energy is conserved through the beam-splitter network") {
    for (int b = 0; b < 2; ++b)
        for (int ab = 0; ab < 2; ++ab)
            for (int bb = 0; bb < 2; ++bb)
                for (double em : {0.0, 0.3, 1.0}) {
                    RotationAngles ang{0.21, -0.13, 0.05};
                    EncodingPair p{b == 0 ? Basis::Z : Basis::X, ab, bb};
                    double ref = detector_intensities(p, ang, 0.0, 0.4, 0.25, em).total();
                    CHECK(ref == doctest::Approx(0.4 * 0.4 + 0.25 * 0.25).epsilon(1e-12));
                    for (double phi : {0.5, 1.9, 4.4}) {
                        DetectorIntensities d = detector_intensities(p, ang, phi, 0.4, 0.25, em);
                        CHECK(std::abs(d.total() - ref) <= 1e-12);
                        CHECK(d.ch >= 0.0);
                        CHECK(d.cv >= 0.0);
                        CHECK(d.dh >= 0.0);
                        CHECK(d.dv >= 0.0);
                    }
                }
}

TEST_CASE("full mode mismatch removes the phase dependence") {
    RotationAngles ang{0.1, 0.2, 0.0};
    DetectorIntensities a = detector_intensities({Basis::X, 0, 1}, ang, 0.0, 0.3, 0.2, 1.0);
    DetectorIntensities b = detector_intensities({Basis::X, 0, 1}, ang, 2.5, 0.3, 0.2, 1.0);
    CHECK(a.ch == doctest::Approx(b.ch));
    CHECK(a.cv == doctest::Approx(b.cv));
    CHECK(a.dh == doctest::Approx(b.dh));
    CHECK(a.dv == doctest::Approx(b.dv));
}

TEST_CASE("coincidences match the independent phase integration") {
    for (bool same : {true, false})
        for (double ed1 : {0.0, 0.02, 0.15})
            for (double y0 : {0.0, 1e-4}) {
                double ga = 0.25, gb = 0.1;
                RotationAngles ang = two_rotation(ed1, same);
                CoincidenceResult hh = coincidence_gains({Basis::Z, 0, 0}, ang, ga, gb, 0.0, y0, 128);
                CoincidenceResult hv = coincidence_gains({Basis::Z, 0, 1}, ang, ga, gb, 0.0, y0, 128);
                oracle::Bell ohh = oracle::hh_numeric(ga, gb, ed1, y0, same, 4096);
                oracle::Bell ohv = oracle::hv_numeric(ga, gb, ed1, y0, same, 4096);
                CHECK(std::abs(hh.q_triplet - ohh.triplet) <= 1e-12);
                CHECK(std::abs(hh.q_singlet - ohh.singlet) <= 1e-12);
                CHECK(std::abs(hv.q_triplet - ohv.triplet) <= 1e-12);
                CHECK(std::abs(hv.q_singlet - ohv.singlet) <= 1e-12);
            }
}

TEST_CASE("coincidence edge cases") {
    CoincidenceResult r = coincidence_gains({Basis::Z, 0, 0}, {}, 0.0, 0.0, 0.0, 0.0, 32);
    CHECK(r.q_triplet == 0.0);
    CHECK(r.q_singlet == 0.0);
    CHECK_THROWS_AS(coincidence_gains({Basis::Z, 0, 0}, {}, 0.1, 0.1, 0.0, 0.0, 8), ValidationError);
    CHECK_THROWS_AS(coincidence_gains({Basis::Z, 0, 0}, {}, 0.1, 0.1, 0.0, 0.0, 33), ValidationError);

    CoincidenceResult z = coincidence_gains({Basis::Z, 1, 1}, {}, 0.3, 0.3, 0.0, 0.0, 64);
    CHECK(z.is_error_triplet);
    CHECK(z.is_error_singlet);
    CoincidenceResult x = coincidence_gains({Basis::X, 0, 1}, {}, 0.3, 0.3, 0.0, 0.0, 64);
    CHECK(x.is_error_triplet);
    CHECK_FALSE(x.is_error_singlet);
}

TEST_CASE("angle sign: totals invariant, ordering flips") {
    double ga = 0.3, gb = 0.2, ed1 = 0.05;
    for (int bb = 0; bb < 2; ++bb) {
        CoincidenceResult s = coincidence_gains({Basis::Z, 0, bb}, two_rotation(ed1, true), ga, gb, 0.0, 1e-5, 128);
        CoincidenceResult o = coincidence_gains({Basis::Z, 0, bb}, two_rotation(ed1, false), ga, gb, 0.0, 1e-5, 128);
        CHECK(std::abs(s.q_total() - o.q_total()) <= 1e-12);
    }
    CoincidenceResult s = coincidence_gains({Basis::Z, 0, 0}, two_rotation(ed1, true), ga, gb, 0.0, 0.0, 128);
    CoincidenceResult o = coincidence_gains({Basis::Z, 0, 0}, two_rotation(ed1, false), ga, gb, 0.0, 0.0, 128);
    CHECK(s.q_triplet >= s.q_singlet);
    CHECK(o.q_triplet <= o.q_singlet);
}

TEST_CASE("gain and QBER basics") {
    SystemParams p = SystemParams::practical();
    p.e_d = 0.0;
    p.y0 = 0.0;
    ChannelGeometry g = ChannelGeometry::symmetric(20.0, 0.2);
    for (double em : {0.0, 0.5, 1.0}) {
        p.e_m = em;
        GainQber z = gain_and_qber(Basis::Z, 0.4, 0.4, g, p);
        CHECK(z.gain > 0.0);
        CHECK(z.qber == 0.0);
    }

    // X basis with phase-randomized pulses: the error floor is 1/4, approached
    // from below as the intensity drops
    p.e_m = 0.0;
    double prev = 0.0;
    for (double mu : {0.1, 0.01, 0.001}) {
        GainQber x = gain_and_qber(Basis::X, mu, mu, g, p);
        CHECK(x.qber > prev);
        CHECK(x.qber <= 0.25);
        prev = x.qber;
    }
    CHECK(prev == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("Z basis barely notices mode mismatch at low intensity") {
    SystemParams p = SystemParams::practical();
    p.y0 = 0.0;
    p.mc_samples = 50;
    ChannelGeometry g = ChannelGeometry::symmetric(0.0, 0.2);
    p.e_m = 0.0;
    double q0 = gain_and_qber(Basis::Z, 0.1, 0.1, g, p).gain;
    for (double em : {0.2, 0.6, 1.0}) {
        p.e_m = em;
        double q = gain_and_qber(Basis::Z, 0.1, 0.1, g, p).gain;
        CHECK(std::abs(q - q0) / q0 <= 1e-2);
    }
}

TEST_CASE("party exchange symmetry") {
    SystemParams p = SystemParams::practical();
    p.e_m = 0.0;  // the mismatch sits on Bob's pulse only
    p.misalignment_mode = MisalignmentMode::FixedAngles;
    p.fixed_angles = {0.11, 0.07, 0.0};
    p.e_d = p.e1() + p.e2();
    SystemParams q = p;
    q.fixed_angles = {0.07, 0.11, 0.0};
    ChannelGeometry g = ChannelGeometry::from_lengths(10.0, 30.0, 0.2);
    ChannelGeometry h = ChannelGeometry::from_lengths(30.0, 10.0, 0.2);
    for (Basis b : {Basis::Z, Basis::X}) {
        GainQber a = gain_and_qber(b, 0.3, 0.5, g, p);
        GainQber c = gain_and_qber(b, 0.5, 0.3, h, q);
        CHECK(std::abs(a.gain - c.gain) <= 1e-12);
        CHECK(std::abs(a.qber - c.qber) <= 1e-12);
    }
}

TEST_CASE("Monte-Carlo result does not depend on the thread count") {
    SystemParams p = SystemParams::practical();
    p.mc_samples = 300;
    ChannelGeometry g = ChannelGeometry::symmetric(40.0, 0.2);
    GainQber one = gain_and_qber(Basis::X, 0.3, 0.2, g, p);
    p.threads = 3;
    GainQber three = gain_and_qber(Basis::X, 0.3, 0.2, g, p);
    CHECK(one.gain == three.gain);
    CHECK(one.qber == three.qber);
    p.rng_seed = 2;
    CHECK(gain_and_qber(Basis::X, 0.3, 0.2, g, p).gain != one.gain);
}

TEST_CASE("misalignment samples") {
    SystemParams p = SystemParams::practical();
    p.mc_samples = 4000;
    auto s = misalignment_samples(p);
    REQUIRE(s.size() == 4000);
    double m2 = 0.0;
    for (const auto& a : s) m2 += std::sin(a.theta1) * std::sin(a.theta1);
    // E[sin^2 theta] ~ sigma^2 for small sigma, sigma^2 = asin(sqrt(e1))^2
    double sigma = std::asin(std::sqrt(p.e1()));
    CHECK(m2 / s.size() == doctest::Approx(sigma * sigma).epsilon(0.08));

    p.e_d = 0.0;
    CHECK(misalignment_samples(p).size() == 1);
    p.misalignment_mode = MisalignmentMode::FixedAngles;
    CHECK(misalignment_samples(p).size() == 1);
}
