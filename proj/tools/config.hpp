#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace cli {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat key/value configuration: `key = value` lines, optional [section]
// headers that prefix keys with "section.", quoted strings, # comments.
class AppConfig {
  public:
    static AppConfig fromFile(const std::filesystem::path& path);
    static AppConfig fromString(const std::string& text, const std::string& origin = "config");

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string str(const std::string& key, const std::string& fallback = "") const;
    long long integer(const std::string& key, long long fallback) const;
    double real(const std::string& key, double fallback) const;
    bool boolean(const std::string& key, bool fallback) const;

    // Keys ending in .path or declared as paths must exist on disk.
    void requirePathsExist() const;

    std::string toJson() const;
    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace cli
