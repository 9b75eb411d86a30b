// znodes: node generation, conditioning tables and wavefront experiments.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "zernike/commands.hpp"
#include "zernike/config.hpp"

namespace {

struct FlagSet {
    std::map<std::string, std::string> values;
    std::string config_file;
    bool quiet = false;
};

void add_common_options(CLI::App& sub, FlagSet& flags) {
    const auto string_flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        sub.add_option(name, flags.values[key], help);
    };
    string_flag("--n", "n", "Radial order");
    string_flag("--orders", "orders", "Orders: 7, 2..20 or 1,3,5");
    string_flag("--scheme,--schemes", "schemes", "ocs, carnicer, cuyt, spiral, random, afp, lebesgue, fekete, file");
    string_flag("--basis,--bases", "bases", "Basis families: Z, K, H, E, O, C");
    string_flag("--domain", "domain", "disk, hexagon, ellipse or annulus");
    string_flag("--A", "A", "Ellipse semi-major axis (default 2) or annulus outer radius (default 1)");
    string_flag("--B", "B", "Ellipse semi-minor axis (default 1)");
    string_flag("--a", "a", "Annulus inner radius (default 0.5)");
    string_flag("--epsilon", "epsilon", "Radial push for annulus nodes on the inner circle (default 0.01)");
    string_flag("--seed", "seed", "Master seed");
    string_flag("--strength", "strength", "Turbulence strength");
    string_flag("--trials", "trials", "Wavefronts per cell");
    string_flag("--output,-o", "output", "Output file, '-' for stdout");
    string_flag("--node-dir", "node-dir", "Directory with <scheme>_<n>.txt node files");
    string_flag("--from-file", "from-file", "Single node file for a file scheme");
    string_flag("--grid", "grid", "Lebesgue grid RADIALxANGULAR (default 200x512)");
    sub.add_option("--config", flags.config_file, "Key-value config file; flags override it");
    sub.add_flag("--quiet,-q", flags.quiet, "No progress output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolation nodes, collocation conditioning and zonal wavefront reconstruction"};
    app.require_subcommand(1);

    FlagSet flags;
    for (const auto& [name, help] : std::map<std::string, std::string>{
             {"nodes", "Write node coordinates transferred to a domain"},
             {"condition-table", "Collocation condition numbers as CSV"},
             {"wavefront", "Zonal wavefront reconstruction RRMSE as CSV"},
             {"lebesgue", "Grid estimate of the Lebesgue constant as CSV"}}) {
        add_common_options(*app.add_subcommand(name, help), flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors share the configuration-error status; help and version exit 0.
        return app.exit(e) == 0 ? 0 : 2;
    }

    zernike::RunConfig config;
    config.command = app.get_subcommands().front()->get_name();
    try {
        if (!flags.config_file.empty()) zernike::load_config_file(config, flags.config_file);
        for (const auto& [key, value] : flags.values) {
            if (!value.empty()) zernike::apply_setting(config, key, value);
        }
        if (flags.quiet) config.quiet = true;

        if (config.output == "-") return zernike::run_command(config, std::cout, std::cerr);
        std::ofstream out(config.output);
        if (!out) {
            std::cerr << "error: cannot open " << config.output << " for writing\n";
            return 1;
        }
        const int status = zernike::run_command(config, out, std::cerr);
        out.flush();
        if (!out) {
            std::cerr << "error: failed writing " << config.output << '\n';
            return 1;
        }
        return status;
    } catch (const zernike::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
