#pragma once

// Run configuration shared by the CLI subcommands. Settings come from an
// optional key-value file ("key = value", '#' comments) and from flags; flags
// are applied last and win. Both routes go through apply_setting, so the same
// keys and validation apply.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zernike/collocation.hpp"
#include "zernike/domains.hpp"

namespace zernike {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;
    std::vector<int> orders;
    std::vector<std::string> schemes;
    std::vector<std::string> bases;
    std::string domain = "disk";
    std::optional<double> A;
    std::optional<double> B;
    std::optional<double> a;
    double epsilon = kDefaultAnnulusEpsilon;
    std::uint64_t seed = 1;
    double strength = 1.0;
    std::size_t trials = 100;
    std::string output = "-";
    std::optional<std::filesystem::path> node_dir;
    std::optional<std::filesystem::path> from_file;
    PolarGrid grid{};
    bool quiet = false;
};

/// Environment variable that supplies the node-file directory when no
/// node-dir setting is given.
inline constexpr const char* kNodeDirEnv = "ZNODES_NODE_DIR";

/// Known keys: n, orders, scheme, schemes, basis, bases, domain, A, B, a,
/// epsilon, seed, strength, trials, output, node-dir, from-file, grid, quiet.
/// Throws ConfigError for unknown keys or malformed values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Applies every "key = value" line. Throws ConfigError with the line number.
void load_config(RunConfig& config, std::istream& in, std::string_view source = "config");
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// "7", "2..20", "1,3,5" or mixtures such as "1..3,10".
std::vector<int> parse_orders(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

/// Checks command-specific requirements and fills defaults (bases from the
/// domain, schemes). Throws ConfigError.
void validate(RunConfig& config);

DomainMap make_domain(const RunConfig& config);
Family parse_family(std::string_view name);
std::optional<Scheme> parse_generated_scheme(std::string_view name);
/// Schemes read from node files: lebesgue, fekete, file.
bool is_file_scheme(std::string_view name);

/// Disk nodes for a scheme name. Generated schemes use config.seed; file
/// schemes read from-file, or <node-dir>/<scheme>_<n>.txt (node-dir falling back to
/// the environment variable). Throws NodeFileError when no file is available.
NodeSet resolve_nodes(const RunConfig& config, const std::string& scheme, int n);

}  // namespace zernike
