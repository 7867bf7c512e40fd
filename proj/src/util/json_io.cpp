#include "ragqa/util/json_io.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "ragqa/errors.hpp"

namespace ragqa::io {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw StorageError(path.string(), ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError(path.string(), "open failed");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw StorageError(path.string(), "write failed");
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
    std::string buf;
    for (const auto& r : records) {
        buf += r.dump(-1, ' ', false, json::error_handler_t::replace);
        buf += '\n';
    }
    write_file(path, buf);
}

std::string dump_pretty(const json& j) {
    // nlohmann::json objects are std::map backed, so keys are already sorted.
    return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string rfc3339(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace ragqa::io
