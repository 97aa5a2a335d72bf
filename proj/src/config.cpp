#include "membrane/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace membrane {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key");
        if (section.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": key outside any [section]");
        cfg.entries_[section + "." + key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::runtime_error("config key " + key + ": not a number: " + it->second);
    return v;
}

long Config::get_int(const std::string& key, long fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size())
        throw std::runtime_error("config key " + key + ": not an integer: " + it->second);
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::runtime_error("config key " + key + ": not a boolean: " + it->second);
}

void Config::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

void Config::require_known(const std::set<std::string>& allowed) const {
    std::string bad;
    for (const auto& [key, value] : entries_)
        if (!allowed.count(key)) bad += (bad.empty() ? "" : ", ") + key;
    if (!bad.empty()) throw std::runtime_error("unknown config keys: " + bad);
}

std::string ExperimentManifest::to_json() const {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["seed"] = seed;
    j["flagged"] = flagged;
    if (flagged) j["flag_reason"] = flag_reason;
    j["config"] = config_echo;  // std::map iterates sorted
    j["metrics"] = metrics;
    j["artifacts"] = artifacts;
    j["wall_clock_seconds"] = wall_clock_seconds;
    return j.dump(2) + "\n";
}

void ExperimentManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << to_json();
}

ExperimentManifest ExperimentManifest::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    ExperimentManifest m;
    m.id = j.at("id").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.flagged = j.at("flagged").get<bool>();
    if (j.contains("flag_reason")) m.flag_reason = j["flag_reason"].get<std::string>();
    m.config_echo = j.at("config").get<std::map<std::string, std::string>>();
    m.metrics = j.at("metrics").get<std::map<std::string, double>>();
    m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    return m;
}

}  // namespace membrane
