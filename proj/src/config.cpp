#include "zernike/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>

#include "zernike/samplings.hpp"

namespace zernike {

namespace {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    text = trim(text);
    T value{};
    const char* begin = text.data();
    if (!text.empty() && text.front() == '+') ++begin;
    const auto result = std::from_chars(begin, text.data() + text.size(), value);
    if (text.empty() || result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

const std::set<std::string, std::less<>> kKnownSchemes{"ocs",    "carnicer", "cuyt",    "spiral", "random",
                                                       "afp",    "lebesgue", "fekete",  "file"};

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return items;
}

std::vector<int> parse_orders(std::string_view text) {
    std::vector<int> orders;
    for (const auto& item : split_list(text)) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            orders.push_back(parse_number<int>("orders", item));
            continue;
        }
        const int first = parse_number<int>("orders", std::string_view(item).substr(0, dots));
        const int last = parse_number<int>("orders", std::string_view(item).substr(dots + 2));
        if (last < first) throw ConfigError("empty order range '" + item + "'");
        for (int n = first; n <= last; ++n) orders.push_back(n);
    }
    if (orders.empty()) throw ConfigError("no orders given");
    for (const int n : orders) {
        if (n < 0 || n > kMaxRadialOrder) throw ConfigError("order " + std::to_string(n) + " out of range");
    }
    return orders;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "n" || key == "orders") {
        config.orders = parse_orders(value);
    } else if (key == "scheme" || key == "schemes") {
        config.schemes.clear();
        for (const auto& item : split_list(value)) config.schemes.push_back(lower(item));
    } else if (key == "basis" || key == "bases") {
        config.bases = split_list(value);
    } else if (key == "domain") {
        config.domain = lower(value);
    } else if (key == "A") {
        config.A = parse_number<double>(key, value);
    } else if (key == "B") {
        config.B = parse_number<double>(key, value);
    } else if (key == "a") {
        config.a = parse_number<double>(key, value);
    } else if (key == "epsilon") {
        config.epsilon = parse_number<double>(key, value);
        if (!(config.epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
    } else if (key == "seed") {
        config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "strength") {
        config.strength = parse_number<double>(key, value);
        if (!(config.strength > 0.0)) throw ConfigError("strength must be positive");
    } else if (key == "trials") {
        config.trials = parse_number<std::size_t>(key, value);
        if (config.trials < 1) throw ConfigError("trials must be at least 1");
    } else if (key == "output") {
        config.output = std::string(value);
    } else if (key == "node-dir") {
        config.node_dir = std::filesystem::path(std::string(value));
    } else if (key == "from-file") {
        config.from_file = std::filesystem::path(std::string(value));
    } else if (key == "grid") {
        const auto x = value.find('x');
        if (x == std::string_view::npos) throw ConfigError("grid must look like RADIALxANGULAR, e.g. 200x512");
        config.grid.radial = parse_number<int>(key, value.substr(0, x));
        config.grid.angular = parse_number<int>(key, value.substr(x + 1));
        if (config.grid.radial < 2 || config.grid.angular < 1) throw ConfigError("grid too coarse");
    } else if (key == "quiet") {
        config.quiet = parse_bool(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
}

void load_config(RunConfig& config, std::istream& in, std::string_view source) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source) + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        try {
            apply_setting(config, body.substr(0, eq), body.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(source) + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    load_config(config, in, path.string());
}

Family parse_family(std::string_view name) {
    const std::string upper = [&] {
        std::string s(trim(name));
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        return s;
    }();
    if (upper == "Z") return Family::Z;
    if (upper == "K") return Family::K;
    if (upper == "H") return Family::H;
    if (upper == "E") return Family::E;
    if (upper == "O") return Family::O;
    if (upper == "C") return Family::C;
    throw ConfigError("unknown basis family '" + std::string(name) + "'");
}

std::optional<Scheme> parse_generated_scheme(std::string_view name) {
    if (name == "ocs") return Scheme::OCS;
    if (name == "carnicer") return Scheme::Carnicer;
    if (name == "cuyt") return Scheme::Cuyt;
    if (name == "spiral") return Scheme::Spiral;
    if (name == "random") return Scheme::RandomThinned;
    if (name == "afp") return Scheme::ApproxFekete;
    return std::nullopt;
}

bool is_file_scheme(std::string_view name) { return name == "lebesgue" || name == "fekete" || name == "file"; }

DomainMap make_domain(const RunConfig& config) {
    try {
        if (config.domain == "disk") return DomainMap::disk();
        if (config.domain == "hexagon") return DomainMap::hexagon();
        if (config.domain == "ellipse") return DomainMap::ellipse(config.A.value_or(2.0), config.B.value_or(1.0));
        if (config.domain == "annulus") return DomainMap::annulus(config.a.value_or(0.5), config.A.value_or(1.0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown domain '" + config.domain + "' (disk, hexagon, ellipse, annulus)");
}

void validate(RunConfig& config) {
    static const std::set<std::string, std::less<>> kCommands{"nodes", "condition-table", "wavefront", "lebesgue"};
    if (!kCommands.contains(config.command)) throw ConfigError("unknown command '" + config.command + "'");
    const bool wavefront = config.command == "wavefront";
    if (wavefront) config.domain = "hexagon";
    const DomainMap map = make_domain(config);

    if (config.orders.empty()) {
        if (config.command == "condition-table") config.orders = parse_orders("1..30");
        else if (wavefront) config.orders = parse_orders("2..20");
        else throw ConfigError("no order given (use --n or --orders)");
    }
    if (config.schemes.empty()) {
        if (config.command == "condition-table" || wavefront || config.command == "lebesgue") {
            config.schemes = {"ocs"};
        } else {
            throw ConfigError("no scheme given (use --scheme)");
        }
    }
    for (const auto& scheme : config.schemes) {
        if (!kKnownSchemes.contains(scheme)) throw ConfigError("unknown scheme '" + scheme + "'");
    }
    if (config.command == "nodes" && config.schemes.size() != 1) throw ConfigError("nodes takes a single scheme");
    if (config.from_file) {
        if (config.orders.size() != 1) throw ConfigError("from-file needs exactly one order");
        if (config.schemes.size() != 1 || !is_file_scheme(config.schemes.front())) {
            throw ConfigError("from-file needs a single file scheme (lebesgue, fekete or file)");
        }
    }

    if (config.bases.empty()) {
        switch (map.kind()) {
            case DomainKind::Disk: config.bases = {"Z"}; break;
            case DomainKind::Hexagon: config.bases = wavefront ? std::vector<std::string>{"K", "H"}
                                                               : std::vector<std::string>{"H"}; break;
            case DomainKind::Ellipse: config.bases = {"E"}; break;
            case DomainKind::Annulus: config.bases = {"O"}; break;
        }
    }
    for (auto& basis : config.bases) {
        const Family family = parse_family(basis);
        if (!family_valid_for(family, map.kind())) {
            throw ConfigError("basis " + basis + " is not defined on the " + map.describe());
        }
        basis = std::string(to_string(family));
    }
    if (map.kind() == DomainKind::Annulus && map.inner_radius() + config.epsilon > map.outer_radius()) {
        throw ConfigError("epsilon pushes perturbed nodes past the outer radius");
    }
    if (wavefront) {
        for (const auto& scheme : config.schemes) {
            if (scheme == "random") {
                for (const int n : config.orders) {
                    if (basis_size(n) > kThinningCandidates) throw ConfigError("random scheme limited to N <= 1000");
                }
            }
        }
    }
}

NodeSet resolve_nodes(const RunConfig& config, const std::string& scheme, int n) {
    if (const auto generated = parse_generated_scheme(scheme)) return generate_nodes(*generated, n, config.seed);
    if (!is_file_scheme(scheme)) throw ConfigError("unknown scheme '" + scheme + "'");
    std::filesystem::path path;
    if (config.from_file) {
        path = *config.from_file;
    } else {
        std::optional<std::filesystem::path> dir = config.node_dir;
        if (!dir) {
            if (const char* env = std::getenv(kNodeDirEnv); env != nullptr && *env != '\0') dir = env;
        }
        if (!dir) throw NodeFileError("missing node directory for scheme '" + scheme + "'");
        path = *dir / (scheme + "_" + std::to_string(n) + ".txt");
    }
    if (!std::filesystem::exists(path)) throw NodeFileError("missing node file " + path.string());
    NodeSet set = load_nodes(path, n);
    set.metadata = scheme + " nodes from " + path.string();
    return set;
}

}  // namespace zernike
