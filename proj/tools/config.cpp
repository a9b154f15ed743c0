#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cli {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

AppConfig AppConfig::fromString(const std::string& text, const std::string& origin) {
    AppConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        bool inQuote = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') inQuote = !inQuote;
            if (line[i] == '#' && !inQuote) {
                hash = i;
                break;
            }
            hash = std::string::npos;
        }
        std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineNo) + ": bad section header");
            section = trim(body.substr(1, body.size() - 2));
            continue;
        }
        size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineNo) + ": expected key = value");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineNo) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (!section.empty()) key = section + "." + key;
        cfg.values_[key] = value;
    }
    return cfg;
}

AppConfig AppConfig::fromFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return fromString(buf.str(), path.string());
}

std::string AppConfig::str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long long AppConfig::integer(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (...) {
        throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
}

double AppConfig::real(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
}

bool AppConfig::boolean(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: " + it->second);
}

void AppConfig::requirePathsExist() const {
    for (const auto& [key, value] : values_) {
        if (key.rfind("paths.", 0) != 0 || value.empty()) continue;
        if (!std::filesystem::exists(value))
            throw ConfigError("config path '" + key + "' does not exist: " + value);
    }
}

std::string AppConfig::toJson() const {
    nlohmann::json j;
    for (const auto& [key, value] : values_) j[key] = value;
    return j.dump();
}

}  // namespace cli
