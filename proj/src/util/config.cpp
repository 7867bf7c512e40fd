#include "ragqa/util/config.hpp"

#include <cstdlib>
#include <sstream>

#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa {
namespace {

std::string unquote(std::string_view raw, std::size_t lineno) {
    const char q = raw.front();
    if (raw.size() < 2 || raw.back() != q) {
        throw ValidationError("config line " + std::to_string(lineno) + ": unterminated string");
    }
    std::string_view body = raw.substr(1, raw.size() - 2);
    if (q == '\'') return std::string(body);
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] != '\\' || i + 1 == body.size()) {
            out.push_back(body[i]);
            continue;
        }
        switch (body[++i]) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default: out.push_back('\\'); out.push_back(body[i]); break;
        }
    }
    return out;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == '\\' && quote == '"') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = text::trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ValidationError("config line " + std::to_string(lineno) + ": bad section header");
            }
            section = std::string(text::trim(body.substr(1, body.size() - 2)));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key(text::trim(body.substr(0, eq)));
        const std::string_view raw = text::trim(body.substr(eq + 1));
        if (key.empty() || raw.empty()) {
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key or value");
        }
        std::string value = (raw.front() == '"' || raw.front() == '\'') ? unquote(raw, lineno)
                                                                          : std::string(raw);
        cfg.values_[section.empty() ? key : section + "." + key] = std::move(value);
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    return parse(io::read_file(path));
}

std::optional<std::string> ConfigFile::get(const std::string& dotted_key) const {
    if (auto it = values_.find(dotted_key); it != values_.end()) return it->second;
    return std::nullopt;
}

void ConfigFile::set(const std::string& dotted_key, std::string value) {
    values_[dotted_key] = std::move(value);
}

std::string resolve_setting(const std::optional<std::string>& flag,
                            const char* env_var,
                            const ConfigFile& file,
                            const std::string& dotted_key,
                            const std::string& fallback) {
    if (flag && !flag->empty()) return *flag;
    if (env_var != nullptr) {
        if (const char* env = std::getenv(env_var); env != nullptr && *env != '\0') return env;
    }
    if (auto v = file.get(dotted_key)) return *v;
    return fallback;
}

}  // namespace ragqa
