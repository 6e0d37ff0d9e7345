#ifndef MDIQKD_SCENARIOS_HPP
#define MDIQKD_SCENARIOS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mdiqkd/config.hpp"

namespace mdiqkd {

// One output series. Cells are already formatted; numeric cells go through
// table_number, which refuses non-finite values.
struct CsvTable {
    std::string name;  // file stem, e.g. "fig3"
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os) const;
};

// %.17g, or NumericalError naming the column when v is not finite.
std::string table_number(double v, const std::string& column);

const std::vector<std::string>& preset_names();

// Overrides a preset applies on top of Config::defaults(). Unknown name is a
// ConfigError.
void apply_preset(const std::string& name, Config& cfg);

std::vector<CsvTable> run_preset(const std::string& name, const Config& cfg);

// 18-row gain table at intensities.* and channel.*.
std::vector<CsvTable> run_simulate(const Config& cfg);

// Gain table, the decoy bounds and the two-decoy rate at intensities.*.
std::vector<CsvTable> run_decoy_bounds(const Config& cfg);

// Single-point optimization with rate.mode and optimizer.constraint.
std::vector<CsvTable> run_optimize(const Config& cfg);

struct SelftestOutcome {
    std::vector<CsvTable> tables;
    double max_abs_deviation = 0.0;
    bool passed = false;
};

// Interference engine against the closed-form Bessel gains on a fixed grid
// of amplitudes, misalignments and background rates, both angle signs.
SelftestOutcome run_selftest(const Config& cfg, double tolerance = 1e-9);

}  // namespace mdiqkd

#endif  // MDIQKD_SCENARIOS_HPP
