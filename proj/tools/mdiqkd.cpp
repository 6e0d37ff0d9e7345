// mdiqkd: scenario runner. Every run writes one CSV per series plus
// manifest.txt with the fully resolved configuration.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdiqkd/config.hpp"
#include "mdiqkd/error.hpp"
#include "mdiqkd/scenarios.hpp"

namespace fs = std::filesystem;
using namespace mdiqkd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonFlags {
    std::string preset;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> mc_samples;
    std::optional<int> quadrature;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--preset", f.preset, "named scenario; its overrides are applied before --config");
    sub->add_option("--config", f.config_path, "key = value file")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out_dir, "output directory (created if missing)");
    sub->add_option("--seed", f.seed, "Monte-Carlo seed");
    sub->add_option("--threads", f.threads, "worker threads for the interference engine");
    sub->add_option("--mc-samples", f.mc_samples, "misalignment samples per evaluation");
    sub->add_option("--quadrature", f.quadrature, "phase quadrature points (even, >= 16)");
}

Config resolve(const CommonFlags& f, bool preset_required) {
    Config c = Config::defaults();
    if (preset_required && f.preset.empty()) throw ConfigError("--preset is required for this subcommand");
    if (!f.preset.empty()) apply_preset(f.preset, c);
    if (!f.config_path.empty()) c.merge_file(f.config_path);
    if (f.seed) c.set("numerics.seed", std::to_string(*f.seed));
    if (f.threads) c.set("numerics.threads", std::to_string(*f.threads));
    if (f.mc_samples) c.set("numerics.mc_samples", std::to_string(*f.mc_samples));
    if (f.quadrature) c.set("numerics.quadrature_points", std::to_string(*f.quadrature));
    c.system();  // range checks before any work starts
    c.optimizer();
    return c;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out << body;
    if (!out.flush()) throw IoError("write failed for '" + p.string() + "'");
}

void emit(const std::string& subcommand, const CommonFlags& f, const Config& c, const std::vector<CsvTable>& tables) {
    fs::path dir(f.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::string outputs;
    for (const CsvTable& t : tables) {
        std::ostringstream os;
        t.write(os);
        write_file(dir / (t.name + ".csv"), os.str());
        outputs += (outputs.empty() ? "" : ", ") + t.name + ".csv";
    }
    // no timestamps or paths: identical runs give identical manifests
    std::string m = "subcommand = " + subcommand + "\n";
    m += "preset = " + (f.preset.empty() ? std::string("none") : f.preset) + "\n";
    m += "outputs = " + outputs + "\n";
    m += format_config(c);
    write_file(dir / "manifest.txt", m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDI-QKD performance model: gains, decoy bounds, key rates, intensity optimization"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* simulate = app.add_subcommand("simulate", "gain/QBER table for intensities.* at channel.*");
    auto* decoy = app.add_subcommand("decoy-bounds", "gain table, decoy bounds and two-decoy rate");
    auto* optimize = app.add_subcommand("optimize", "single-point intensity optimization");
    auto* sweep = app.add_subcommand("sweep", "named scenario sweep (see --preset)");
    auto* selftest = app.add_subcommand("selftest", "interference engine against the closed-form gains");
    for (auto* s : {simulate, decoy, optimize, sweep, selftest}) add_common(s, flags);

    std::string preset_help = "presets:";
    for (const auto& n : preset_names()) preset_help += " " + n;
    sweep->footer(preset_help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sweep) {
            Config c = resolve(flags, true);
            emit("sweep", flags, c, run_preset(flags.preset, c));
        } else if (*simulate) {
            Config c = resolve(flags, false);
            emit("simulate", flags, c, run_simulate(c));
        } else if (*decoy) {
            Config c = resolve(flags, false);
            emit("decoy-bounds", flags, c, run_decoy_bounds(c));
        } else if (*optimize) {
            Config c = resolve(flags, false);
            emit("optimize", flags, c, run_optimize(c));
        } else if (*selftest) {
            Config c = resolve(flags, false);
            SelftestOutcome r = run_selftest(c);
            emit("selftest", flags, c, r.tables);
            std::printf("selftest: max |engine - closed form| = %.3e (%s)\n", r.max_abs_deviation,
                        r.passed ? "ok" : "FAIL");
            if (!r.passed) return kExitNumerical;
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "mdiqkd: config error: %s\n", e.what());
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "mdiqkd: numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const IoError& e) {
        std::fprintf(stderr, "mdiqkd: %s\n", e.what());
        return kExitIo;
    }
    return kExitOk;
}
