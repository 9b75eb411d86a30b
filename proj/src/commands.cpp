#include "zernike/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "zernike/collocation.hpp"
#include "zernike/samplings.hpp"
#include "zernike/wavefront.hpp"

namespace zernike {

namespace {

class Progress {
public:
    Progress(const RunConfig& config, std::ostream& log) : quiet_(config.quiet), log_(log), command_(config.command) {}

    void note(const std::string& message) {
        if (quiet_) return;
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char stamp[32];
        std::snprintf(stamp, sizeof(stamp), "%8.2fs", elapsed);
        log_ << '[' << command_ << ' ' << stamp << "] " << message << '\n';
    }

private:
    bool quiet_;
    std::ostream& log_;
    std::string command_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Epsilon only matters for O: C keeps the unperturbed transfer so its
/// collocation matrix equals the disk one.
double epsilon_for(const RunConfig& config, Family family) {
    return family == Family::O ? config.epsilon : 0.0;
}

void warn_degenerate(const DomainMap& map, std::ostream& log) {
    if (map.near_degenerate()) {
        log << "warning: annulus ratio a/A = " << map.ratio() << " > 0.95; expect poor conditioning\n";
    }
}

}  // namespace

int cmd_nodes(const RunConfig& config, std::ostream& out, std::ostream& log) {
    Progress progress(config, log);
    const DomainMap map = make_domain(config);
    warn_degenerate(map, log);
    const auto& scheme = config.schemes.front();
    const Family family = parse_family(config.bases.front());
    for (const int n : config.orders) {
        const NodeSet disk = resolve_nodes(config, scheme, n);
        const NodeSet mapped = transfer_nodes(map, disk, map.kind() == DomainKind::Annulus ? epsilon_for(config, family) : 0.0);
        write_nodes(out, mapped, "domain=" + map.describe() + " source=" + scheme);
        progress.note("n=" + std::to_string(n) + " scheme=" + scheme + " nodes=" + std::to_string(mapped.nodes.size()));
    }
    return 0;
}

int cmd_condition_table(const RunConfig& config, std::ostream& out, std::ostream& log) {
    Progress progress(config, log);
    const DomainMap map = make_domain(config);
    warn_degenerate(map, log);
    out << kConditionCsvHeader << '\n';
    for (const int n : config.orders) {
        for (const auto& scheme : config.schemes) {
            for (const auto& basis_name : config.bases) {
                const Family family = parse_family(basis_name);
                const std::string prefix = std::to_string(n) + "," + scheme + "," + basis_name + "," +
                                           std::string(to_string(map.kind())) + ",";
                try {
                    const NodeSet disk = resolve_nodes(config, scheme, n);
                    const TransferredBasis basis(map, family);
                    CollocationMatrix matrix = assemble(basis, transfer_nodes(map, disk, epsilon_for(config, family)));
                    matrix.provenance.scheme = scheme;
                    matrix.provenance.seed = config.seed;
                    const ConditionReport report = condition_number(matrix);
                    out << to_csv_row(report) << '\n';
                    progress.note(prefix + " kappa2=" + format_kappa(report.kappa2));
                } catch (const NodeFileError& e) {
                    out << prefix << "missing,,\n";
                    progress.note(prefix + " missing: " + e.what());
                } catch (const std::exception& e) {
                    out << prefix << "error,,\n";
                    progress.note(prefix + " error: " + e.what());
                }
            }
        }
    }
    return 0;
}

int cmd_wavefront(const RunConfig& config, std::ostream& out, std::ostream& log) {
    Progress progress(config, log);
    ExperimentConfig experiment;
    experiment.orders = config.orders;
    experiment.trials = config.trials;
    experiment.schemes = config.schemes;
    for (const auto& basis : config.bases) experiment.bases.push_back(parse_family(basis));
    experiment.seed = config.seed;
    experiment.strength = config.strength;
    progress.note("running " + std::to_string(config.orders.size() * config.schemes.size() * config.bases.size()) +
                  " cells x " + std::to_string(config.trials) + " trials");
    const auto rows = run_experiment(experiment, [&config](const std::string& scheme, int n) {
        return resolve_nodes(config, scheme, n);
    });
    out << kExperimentCsvHeader << '\n';
    for (const auto& row : rows) {
        out << to_csv_row(row) << '\n';
        if (!row.failure.empty()) {
            progress.note("n=" + std::to_string(row.order) + " " + row.scheme + "/" + std::string(to_string(row.family)) +
                          " failed: " + row.failure);
        }
    }
    progress.note("done");
    return 0;
}

int cmd_lebesgue(const RunConfig& config, std::ostream& out, std::ostream& log) {
    Progress progress(config, log);
    const DomainMap map = make_domain(config);
    warn_degenerate(map, log);
    out << "n,scheme,basis,domain,lebesgue\n";
    for (const int n : config.orders) {
        for (const auto& scheme : config.schemes) {
            for (const auto& basis_name : config.bases) {
                const Family family = parse_family(basis_name);
                const std::string prefix = std::to_string(n) + "," + scheme + "," + basis_name + "," +
                                           std::string(to_string(map.kind())) + ",";
                try {
                    const NodeSet disk = resolve_nodes(config, scheme, n);
                    const TransferredBasis basis(map, family);
                    const double value =
                        lebesgue_constant(basis, transfer_nodes(map, disk, epsilon_for(config, family)), config.grid);
                    char buffer[64];
                    std::snprintf(buffer, sizeof(buffer), "%.6e", value);
                    out << prefix << buffer << '\n';
                    progress.note(prefix + " lebesgue=" + buffer);
                } catch (const NodeFileError& e) {
                    out << prefix << "missing\n";
                    progress.note(prefix + " missing: " + e.what());
                } catch (const std::exception& e) {
                    out << prefix << "error\n";
                    progress.note(prefix + " error: " + e.what());
                }
            }
        }
    }
    return 0;
}

int run_command(RunConfig config, std::ostream& out, std::ostream& log) {
    validate(config);
    if (config.command == "nodes") return cmd_nodes(config, out, log);
    if (config.command == "condition-table") return cmd_condition_table(config, out, log);
    if (config.command == "wavefront") return cmd_wavefront(config, out, log);
    return cmd_lebesgue(config, out, log);
}

}  // namespace zernike
