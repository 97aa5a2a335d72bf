#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace membrane {

// Flat key-value config with [section] headers; values are stored as strings
// under "section.key". Lines starting with '#' and blank lines are ignored.
class Config {
  public:
    Config() = default;
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);

    // unknown keys are errors: throws listing every key not in `allowed`
    void require_known(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

struct ExperimentManifest {
    std::string id;
    std::map<std::string, std::string> config_echo;
    std::map<std::string, double> metrics;
    std::vector<std::string> artifacts;
    std::uint64_t seed = 0;
    double wall_clock_seconds = 0.0;  // excluded from determinism comparisons
    bool flagged = false;
    std::string flag_reason;

    std::string to_json() const;  // deterministic except wall_clock_seconds
    void write(const std::string& path) const;
    static ExperimentManifest read(const std::string& path);
};

}  // namespace membrane
