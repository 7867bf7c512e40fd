#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace ragqa {

/// Flat view over a TOML-style settings file. Supports `[section]` headers,
/// `key = value` lines with quoted strings, numbers and booleans, and `#`
/// comments. Keys are addressed as "section.key".
class ConfigFile {
public:
    ConfigFile() = default;

    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::filesystem::path& path);

    std::optional<std::string> get(const std::string& dotted_key) const;
    void set(const std::string& dotted_key, std::string value);

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Resolution order: explicit flag, then environment variable, then config
/// file key, then the fallback.
std::string resolve_setting(const std::optional<std::string>& flag,
                            const char* env_var,
                            const ConfigFile& file,
                            const std::string& dotted_key,
                            const std::string& fallback);

}  // namespace ragqa
