#pragma once

#include "infoprop/degree_model.hpp"
#include "infoprop/meanfield.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace infoprop {

/// Invalid configuration; `key()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error("config key '" + key + "': " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

inline constexpr const char* kParallelismEnv = "INFOPROP_PARALLELISM";
inline constexpr int kDefaultStepsPerSection = 200;

struct RunConfig {
    DistributionKind distribution = DistributionKind::PoissonLike;
    std::optional<double> gamma;        // Poisson mean
    std::optional<double> gamma_prime;  // power-law exponent
    int k_min = 1;
    std::optional<int> k_max;
    std::string pmf_file;

    long n = 0;
    std::size_t runs = 100;
    double mu = 1.0;
    double threshold = 0.99;
    int i0 = 5;
    int steps_per_section = kDefaultStepsPerSection;
    std::uint64_t seed = 1;
    unsigned parallelism = 1;
    std::vector<double> milestones{0.01, 0.5, 1.0};
    std::string out = "out";

    double dt = 1e-3;
    double t_end = 100.0;
    Seeding seeding = Seeding::Uniform;

    bool dump_records = false;
    bool export_network = false;

    bool operator==(const RunConfig&) const = default;

    /// Degree parameters; loads the pmf file for empirical distributions.
    DegreeSpec degree_spec() const;
};

using ConfigValues = std::map<std::string, std::string>;

/// Parses "key = value" lines. '#' starts a comment, blank lines and
/// "[section]" headers are ignored. Duplicate keys are rejected.
ConfigValues parse_config_values(std::string_view text);
ConfigValues read_config_values(const std::string& path);

/// Validates values and fills defaults. Unknown keys, missing required keys
/// and out-of-domain values raise ConfigError.
RunConfig parse_config(const ConfigValues& values);
RunConfig parse_config_text(std::string_view text);

/// Writes every field as "key = value"; parse_config_text(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Parallelism from INFOPROP_PARALLELISM, or 1.
unsigned default_parallelism();

} // namespace infoprop
