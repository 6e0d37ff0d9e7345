#include <algorithm>
#include <cmath>
#include <limits>

#include "../oracles/oracles.hpp"
#include "doctest.h"
#include "mdiqkd/analytic.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/optimizer.hpp"

using namespace mdiqkd;

namespace {

SystemParams two_rotation() {
    SystemParams p = SystemParams::practical().with_symmetric_fixed_misalignment(0.015);
    p.e_m = 0.0;
    return p;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("seed grid") {
    SearchOptions o;
    CHECK(seeds_for_dimension(o, 1) == 9);
    CHECK(seeds_for_dimension(o, 2) == 9);
    CHECK(seeds_for_dimension(o, 4) == 3);
    auto g = log_seed_grid({{1e-4, 1.0}}, 4);
    REQUIRE(g.size() == 4);
    // (j + 1/2) / k quantiles of the log interval
    CHECK(g[0][0] == doctest::Approx(std::pow(10.0, -4.0 + 0.5)));
    CHECK(g[3][0] == doctest::Approx(std::pow(10.0, -0.5)));
    CHECK(log_seed_grid({{1e-3, 1.0}, {1e-2, 1.0}}, 3).size() == 9);
}

TEST_CASE("compass search finds a 1-D maximum") {
    const double peak = 0.0371;
    auto f = [&](const std::vector<double>& v) {
        double u = std::log(v[0] / peak);
        return 1.0 - u * u;
    };
    SearchResult r = maximize(f, {{1e-4, 3.0}});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(peak).epsilon(1e-4));
    auto dense = oracle::dense_argmax_log([&](double x) { return f({x}); }, 1e-4, 3.0, 200001);
    // step tolerance 1e-4 in log space leaves at most ~1e-8 on a unit-curvature peak
    CHECK(r.value >= dense.value - 1e-7);

    // maximum on the boundary is reported exactly on it
    SearchResult b = maximize([](const std::vector<double>& v) { return -v[0]; }, {{1e-4, 3.0}});
    CHECK(b.x[0] == 1e-4);
}

TEST_CASE("compass search in 2-D and infeasible regions") {
    auto f = [](const std::vector<double>& v) {
        if (v[0] > 0.5) return -std::numeric_limits<double>::infinity();
        double a = std::log(v[0] / 0.2), b = std::log(v[1] / 0.01);
        return -(a * a + 2 * b * b + a * b);
    };
    SearchResult r = maximize(f, {{1e-3, 2.0}, {1e-4, 1.0}});
    CHECK(r.x[0] == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(0.01).epsilon(1e-3));

    auto nowhere = [](const std::vector<double>&) { return std::nan(""); };
    CHECK_THROWS_AS(maximize(nowhere, {{1e-3, 1.0}}), ValidationError);
}

TEST_CASE("asymptotic optimum against a dense scan") {
    SystemParams p = two_rotation();
    ChannelGeometry g = ChannelGeometry::symmetric(60.0, 0.2);
    OptimizationResult r = optimize_asymptotic(g, p, IntensityConstraint::PartySymmetric);
    CHECK(r.best_settings.alice.mu == r.best_settings.bob.mu);
    auto dense = oracle::dense_argmax_log([&](double m) { return asymptotic_rate(m, m, g, p).rate; }, 1e-4, 3.0, 20001);
    CHECK(r.best_rate >= dense.value * (1 - 1e-6));
    CHECK(r.best_settings.alice.mu == doctest::Approx(dense.x).epsilon(1e-2));
    CHECK(r.report.rate == r.best_rate);

    // the free search on a symmetric channel lands on a symmetric point
    OptimizationResult f = optimize_asymptotic(g, p, IntensityConstraint::Free);
    CHECK(f.best_settings.alice.mu == doctest::Approx(f.best_settings.bob.mu).epsilon(1e-2));
    CHECK(f.best_rate == doctest::Approx(r.best_rate).epsilon(1e-4));
}

TEST_CASE("asymptotic optimum is a local maximum") {
    SystemParams p = two_rotation();
    ChannelGeometry g = ChannelGeometry::from_lengths(20.0, 45.0, 0.2);
    OptimizationResult r = optimize_asymptotic(g, p, IntensityConstraint::Free);
    double ma = r.best_settings.alice.mu, mb = r.best_settings.bob.mu;
    for (double fa : {0.9, 1.0, 1.1})
        for (double fb : {0.9, 1.0, 1.1})
            CHECK(asymptotic_rate(ma * fa, mb * fb, g, p).rate <= r.best_rate * (1 + 1e-12));
}

TEST_CASE("party exchange maps optima onto each other") {
    SystemParams p = two_rotation();
    OptimizationResult a = optimize_asymptotic(ChannelGeometry::from_lengths(10.0, 30.0, 0.2), p,
                                               IntensityConstraint::Free);
    OptimizationResult b = optimize_asymptotic(ChannelGeometry::from_lengths(30.0, 10.0, 0.2), p,
                                               IntensityConstraint::Free);
    CHECK(a.best_rate == doctest::Approx(b.best_rate).epsilon(1e-6));
    CHECK(a.best_settings.alice.mu == doctest::Approx(b.best_settings.bob.mu).epsilon(1e-2));
    CHECK(a.best_settings.bob.mu == doctest::Approx(b.best_settings.alice.mu).epsilon(1e-2));
}

TEST_CASE("two-decoy optimum") {
    SystemParams p = two_rotation();
    ChannelGeometry g = ChannelGeometry::symmetric(40.0, 0.2);
    OptimizerConfig cfg;
    OptimizationResult r = optimize_two_decoy(g, p, IntensityConstraint::PartySymmetric, cfg);
    const auto& a = r.best_settings.alice;
    CHECK(r.best_rate > 0.0);
    CHECK(a.mu > a.nu);
    CHECK(a.nu > a.omega);
    CHECK(a.omega == cfg.omega_floor);
    CHECK(has(r.constraint_active, "omega.floor"));
    CHECK(r.best_rate <= optimize_asymptotic(g, p, IntensityConstraint::PartySymmetric, cfg).best_rate);
    for (double f : {0.9, 1.1}) {
        IntensitySettings s = r.best_settings;
        s.alice.mu *= f;
        s.bob.mu *= f;
        CHECK(two_decoy_rate(s, g, p).rate <= r.best_rate * (1 + 1e-12));
    }
}

TEST_CASE("estimated-rate optimum") {
    SystemParams p = two_rotation();
    ChannelGeometry g = ChannelGeometry::from_ratio(0.1, 10.0, 0.2);
    OptimizationResult r = optimize_r_est(g, p, IntensityConstraint::Free);
    CHECK(r.best_rate == doctest::Approx(r_est(g, r.best_settings.alice.mu, r.best_settings.bob.mu, p)));
    // argmax of G does not depend on t_b
    OptimizationResult far = optimize_r_est(ChannelGeometry::from_ratio(0.1, 60.0, 0.2), p, IntensityConstraint::Free);
    CHECK(far.best_settings.alice.mu == doctest::Approx(r.best_settings.alice.mu).epsilon(1e-3));
    CHECK(far.best_settings.bob.mu == doctest::Approx(r.best_settings.bob.mu).epsilon(1e-3));
}

TEST_CASE("asymmetric comparison") {
    SystemParams p = two_rotation();
    AsymmetricComparison same = asymmetric_compare(1.0, 20.0, RateMode::AsymptoticTruth, p);
    CHECK(std::abs(same.advantage) <= 1e-3);
    CHECK(same.l_ac_km == doctest::Approx(20.0).epsilon(1e-12));

    AsymmetricComparison c = asymmetric_compare(0.1, 0.0, RateMode::AsymptoticTruth, p);
    CHECK(c.advantage > 0.0);
    CHECK(c.optimal_choice.best_rate >= c.symmetric_choice.best_rate);
    CHECK(c.symmetric_choice.best_settings.alice.mu * 0.1 ==
          doctest::Approx(c.symmetric_choice.best_settings.bob.mu).epsilon(1e-12));
}

TEST_CASE("geometry from ratio") {
    ChannelGeometry g = geometry_from_ratio(0.1, 20.0, 0.2);
    CHECK(g.l_bc_km() == 20.0);
    CHECK(g.x() == doctest::Approx(0.1));
    CHECK(g.l_ac_km() == doctest::Approx(70.0));
    CHECK_THROWS_AS(geometry_from_ratio(2.0, 0.0, 0.2), ValidationError);
}

TEST_CASE("estimated-rate scaling check") {
    ScalingReport t = scaling_check(0.1, {0.5, 0.25, 0.1}, two_rotation());
    REQUIRE(t.points.size() == 3);
    CHECK(t.max_argmax_shift <= 1e-2);
    CHECK(t.max_scaling_rel_error <= 1e-6);
    CHECK(t.log_slope_per_km == doctest::Approx(-0.04).epsilon(0.05));
}
