#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mdiqkd/config.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/scenarios.hpp"

using namespace mdiqkd;

TEST_CASE("defaults produce the practical parameter set") {
    Config c = Config::defaults();
    SystemParams p = c.system();
    SystemParams q = SystemParams::practical();
    CHECK(p.eta_d == q.eta_d);
    CHECK(p.y0 == q.y0);
    CHECK(p.e_d == q.e_d);
    CHECK(p.e_m == q.e_m);
    CHECK(p.mc_samples == 2000);
    CHECK(p.misalignment_mode == MisalignmentMode::GaussianMC);
    CHECK(c.rate_mode() == RateMode::AsymptoticTruth);
    CHECK(c.constraint() == IntensityConstraint::PartySymmetric);
    CHECK(c.optimizer().search.seeds_per_variable == 9);
    CHECK(c.intensities().alice.mu == 0.3);
}

TEST_CASE("merge_text") {
    Config c = Config::defaults();
    c.merge_text("# header\n\n  system.e_d = 0.03   # trailing\nsweep.e_d_values = 0.01, 0.02 ,0.05\n"
                 "system.misalignment_mode = two-rotation\nrate.mode = two-decoy\n",
                 "t.cfg");
    CHECK(c.number("system.e_d") == 0.03);
    CHECK(c.numbers("sweep.e_d_values") == std::vector<double>{0.01, 0.02, 0.05});
    CHECK(c.rate_mode() == RateMode::TwoDecoyBounds);
    SystemParams p = c.system();
    CHECK(p.misalignment_mode == MisalignmentMode::FixedAngles);
    CHECK(std::sin(p.fixed_angles.theta1) * std::sin(p.fixed_angles.theta1) == doctest::Approx(0.015));

    // later merges override earlier ones
    c.merge_text("system.e_d = 0.01", "b");
    CHECK(c.number("system.e_d") == 0.01);
    CHECK(format_config(c).find("system.e_d = 0.01\n") != std::string::npos);
}

TEST_CASE("config errors") {
    Config c = Config::defaults();
    CHECK_THROWS_AS(c.set("system.nope", "1"), ConfigError);
    CHECK_THROWS_WITH_AS(c.merge_text("system.e_d = 0.01\nsystem.bogus = 2\n", "x.cfg"), "x.cfg:2: unknown config key 'system.bogus'",
                         ConfigError);
    CHECK_THROWS_AS(c.merge_text("just words\n", "x"), ConfigError);
    CHECK_THROWS_AS(c.merge_text("system.e_d =\n", "x"), ConfigError);
    CHECK_THROWS_AS(c.merge_file("/nonexistent/file.cfg"), ConfigError);

    Config bad = Config::defaults();
    bad.set("system.e_d", "0.0.1");
    CHECK_THROWS_AS(bad.system(), ConfigError);
    bad = Config::defaults();
    bad.set("system.e_d", "nan");
    CHECK_THROWS_AS(bad.number("system.e_d"), ConfigError);
    bad = Config::defaults();
    bad.set("system.e_d", "1.5");
    CHECK_THROWS_AS(bad.system(), ConfigError);
    bad = Config::defaults();
    bad.set("numerics.quadrature_points", "17");
    CHECK_THROWS_AS(bad.system(), ConfigError);
    bad = Config::defaults();
    bad.set("numerics.seed", "-3");
    CHECK_THROWS_AS(bad.system(), ConfigError);
    bad = Config::defaults();
    bad.set("rate.mode", "fast");
    CHECK_THROWS_AS(bad.rate_mode(), ConfigError);
    bad = Config::defaults();
    bad.set("optimizer.mu_lo", "5");
    CHECK_THROWS_AS(bad.optimizer(), ConfigError);
    bad = Config::defaults();
    bad.set("intensities.nu_a", "0.5");
    CHECK_THROWS_AS(bad.intensities(), ConfigError);
    bad = Config::defaults();
    bad.set("sweep.e_d_values", "0.1,,0.2");
    CHECK_THROWS_AS(bad.numbers("sweep.e_d_values"), ConfigError);
}

TEST_CASE("presets") {
    Config c = Config::defaults();
    CHECK_THROWS_AS(apply_preset("fig99", c), ConfigError);
    for (const auto& n : preset_names()) {
        Config d = Config::defaults();
        apply_preset(n, d);
        CHECK_NOTHROW(d.system());
        CHECK_NOTHROW(d.optimizer());
    }
}

TEST_CASE("table formatting") {
    CHECK(table_number(0.5, "x") == "0.5");
    CHECK_THROWS_AS(table_number(std::nan(""), "rate"), NumericalError);
    CHECK_THROWS_AS(table_number(INFINITY, "rate"), NumericalError);
    CsvTable t{"t", {"a", "b"}, {{"1", "2"}}};
    std::ostringstream os;
    t.write(os);
    CHECK(os.str() == "a,b\n1,2\n");
}

TEST_CASE("scenario runners") {
    Config c = Config::defaults();
    c.set("numerics.mc_samples", "50");
    auto sim = run_simulate(c);
    REQUIRE(sim.size() == 1);
    CHECK(sim[0].rows.size() == 18);

    SelftestOutcome s = run_selftest(c);
    CHECK(s.passed);
    CHECK(s.max_abs_deviation <= 1e-9);

    Config f = Config::defaults();
    apply_preset("fig7", f);
    auto a = run_preset("fig7", f);
    auto b = run_preset("fig7", f);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].rows == b[i].rows);
}
