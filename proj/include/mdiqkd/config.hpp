#ifndef MDIQKD_CONFIG_HPP
#define MDIQKD_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mdiqkd/keyrate.hpp"
#include "mdiqkd/optimizer.hpp"
#include "mdiqkd/params.hpp"

namespace mdiqkd {

// Flat key/value configuration:
//
//   # comment
//   system.eta_d = 0.145
//   sweep.e_d_values = 0.01, 0.03, 0.05
//
// Every key must already exist in Config::defaults(); anything else is a
// ConfigError. Values stay as text until a typed getter asks for them.
class Config {
public:
    static Config defaults();

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    // origin is only used in diagnostics ("file.cfg:12: ...").
    void merge_text(const std::string& text, const std::string& origin);
    void merge_file(const std::string& path);

    const std::string& text(const std::string& key) const;
    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    std::uint64_t unsigned64(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;  // comma separated

    const std::map<std::string, std::string>& entries() const { return values_; }

    // Typed views. Validation of the physics ranges happens here too, and
    // failures surface as ConfigError so the CLI can map them to one exit code.
    SystemParams system() const;
    OptimizerConfig optimizer() const;
    IntensitySettings intensities() const;
    ChannelGeometry geometry() const;
    RateMode rate_mode() const;
    IntensityConstraint constraint() const;

private:
    std::map<std::string, std::string> values_;
};

// One "key = value" line per entry, keys sorted.
std::string format_config(const Config& c);

}  // namespace mdiqkd

#endif  // MDIQKD_CONFIG_HPP
