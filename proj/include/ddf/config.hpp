// config.hpp - Flat key-value config files with [section] headers.
//
// Format: one `key = value` per line, `#` or `;` comments, sections in
// square brackets. Lookups are section-qualified.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ddf {

class ConfigFile {
public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    bool has_section(const std::string& section) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// "lo:step:hi" inclusive range, or a comma-separated list of values.
std::vector<double> parse_grid(const std::string& text);

}  // namespace ddf
