#include "qdecay/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qdecay {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    // std::from_chars for double is available in libstdc++ 11.
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError({std::string(key) + ": cannot parse '" + std::string(text) + "' as a number"});
    }
    return value;
}

std::size_t parse_count(std::string_view key, std::string_view text)
{
    unsigned long long value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError({std::string(key) + ": cannot parse '" + std::string(text) + "' as a count"});
    }
    return static_cast<std::size_t>(value);
}

}  // namespace

void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view raw)
{
    const auto value = trim(raw);
    if (key == "x_max") {
        cfg.grid.x_max = parse_double(key, value);
    } else if (key == "n_cells") {
        cfg.grid.n_cells = parse_count(key, value);
    } else if (key == "dt") {
        cfg.dt = parse_double(key, value);
    } else if (key == "t_end") {
        cfg.t_end = parse_double(key, value);
    } else if (key == "barrier_height") {
        cfg.barrier.height = parse_double(key, value);
    } else if (key == "barrier_width") {
        cfg.barrier.width = parse_double(key, value);
    } else if (key == "absorber_start") {
        cfg.absorber.start = parse_double(key, value);
    } else if (key == "absorber_strength") {
        cfg.absorber.strength = parse_double(key, value);
    } else if (key == "absorber_power") {
        cfg.absorber.power = static_cast<int>(parse_count(key, value));
    } else if (key == "probe_a") {
        cfg.probe_a = parse_double(key, value);
    } else if (key == "sample_stride") {
        cfg.sample_stride = parse_count(key, value);
    } else {
        throw ConfigError({"unknown key '" + std::string(key) + "'"});
    }
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError({"override '" + std::string(assignment) + "' is not key=value"});
    }
    set_config_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ScenarioConfig parse_config(std::istream& in, ScenarioConfig base)
{
    std::vector<std::string> errors;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        try {
            apply_override(base, text);
        } catch (const ConfigError& e) {
            for (const auto& v : e.violations()) {
                errors.push_back("line " + std::to_string(lineno) + ": " + v);
            }
        }
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw FileError("cannot open config file " + path.string());
    }
    return parse_config(in, std::move(base));
}

std::string format_config(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    os.precision(17);
    os << "x_max=" << cfg.grid.x_max << '\n'
       << "n_cells=" << cfg.grid.n_cells << '\n'
       << "dt=" << cfg.dt << '\n'
       << "t_end=" << cfg.t_end << '\n'
       << "barrier_height=" << cfg.barrier.height << '\n'
       << "barrier_width=" << cfg.barrier.width << '\n'
       << "absorber_start=" << cfg.absorber.start << '\n'
       << "absorber_strength=" << cfg.absorber.strength << '\n'
       << "absorber_power=" << cfg.absorber.power << '\n'
       << "probe_a=" << cfg.probe_a << '\n'
       << "sample_stride=" << cfg.sample_stride << '\n';
    return os.str();
}

}  // namespace qdecay
