#include "sstg/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sstg/errors.hpp"

namespace sstg {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("config key '" + key + "': not a count: '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + value + "'");
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void Config::validate() const {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (!(forget_rate > 0.0 && forget_rate < 1.0))
        throw ConfigError("forget_rate must be in (0,1)");
    if (!(context_forget_rate > 0.0 && context_forget_rate < 1.0))
        throw ConfigError("context_forget_rate must be in (0,1)");
    if (!(narrate_context_forget_rate > 0.0 && narrate_context_forget_rate < 1.0))
        throw ConfigError("narrate_context_forget_rate must be in (0,1)");
    if (!(boost > 0.0)) throw ConfigError("boost must be positive");
    if (!(prune_floor > 0.0)) throw ConfigError("prune_floor must be positive");
    if (!(context_floor > 0.0)) throw ConfigError("context_floor must be positive");
    if (!(narrate_context_floor > 0.0))
        throw ConfigError("narrate_context_floor must be positive");
    if (!(target_density > 0.0 && target_density <= 1.0))
        throw ConfigError("target_density must be in (0,1]");
    if (!(coactivation_weight >= 1.0))
        throw ConfigError("coactivation_weight must be >= 1");
    if (leg_size == 0) throw ConfigError("leg_size must be >= 1");
    if (sentence_terminators.empty())
        throw ConfigError("sentence_terminators must name at least one character");
    if (!(weak_max > 0.0 && weak_max < meaningful_max && meaningful_max <= self_min &&
          self_min < 100.0))
        throw ConfigError("horizon must satisfy 0 < weak_max < meaningful_max <= self_min < 100");
    if (!(percolation_threshold > 0.0 && percolation_threshold <= 1.0))
        throw ConfigError("percolation_threshold must be in (0,1]");
}

void Config::set(const std::string& key, const std::string& value) {
    if (key == "n_max") n_max = static_cast<int>(parse_count(key, value));
    else if (key == "forget_rate") forget_rate = parse_double(key, value);
    else if (key == "boost") boost = parse_double(key, value);
    else if (key == "prune_floor") prune_floor = parse_double(key, value);
    else if (key == "context_forget_rate") context_forget_rate = parse_double(key, value);
    else if (key == "context_floor") context_floor = parse_double(key, value);
    else if (key == "target_density") target_density = parse_double(key, value);
    else if (key == "coactivation_weight") coactivation_weight = parse_double(key, value);
    else if (key == "leg_size") leg_size = parse_count(key, value);
    else if (key == "sentence_terminators") sentence_terminators = value;
    else if (key == "weak_max") weak_max = parse_double(key, value);
    else if (key == "meaningful_max") meaningful_max = parse_double(key, value);
    else if (key == "self_min") self_min = parse_double(key, value);
    else if (key == "overlap_union_denominator")
        overlap_union_denominator = parse_bool(key, value);
    else if (key == "narrate_context_forget_rate")
        narrate_context_forget_rate = parse_double(key, value);
    else if (key == "narrate_context_floor") narrate_context_floor = parse_double(key, value);
    else if (key == "percolation_threshold") percolation_threshold = parse_double(key, value);
    else
        throw ConfigError("unknown config key '" + key + "'");
}

std::string Config::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "n_max=" << n_max << '\n'
        << "forget_rate=" << forget_rate << '\n'
        << "boost=" << boost << '\n'
        << "prune_floor=" << prune_floor << '\n'
        << "context_forget_rate=" << context_forget_rate << '\n'
        << "context_floor=" << context_floor << '\n'
        << "target_density=" << target_density << '\n'
        << "coactivation_weight=" << coactivation_weight << '\n'
        << "leg_size=" << leg_size << '\n'
        << "sentence_terminators=" << sentence_terminators << '\n'
        << "weak_max=" << weak_max << '\n'
        << "meaningful_max=" << meaningful_max << '\n'
        << "self_min=" << self_min << '\n'
        << "overlap_union_denominator=" << (overlap_union_denominator ? "true" : "false") << '\n'
        << "narrate_context_forget_rate=" << narrate_context_forget_rate << '\n'
        << "narrate_context_floor=" << narrate_context_floor << '\n'
        << "percolation_threshold=" << percolation_threshold << '\n';
    return out.str();
}

Config parse_config_text(const std::string& text, Config base) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        base.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    base.validate();
    return base;
}

Config load_config_file(const std::string& path, Config base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base);
}

}  // namespace sstg
