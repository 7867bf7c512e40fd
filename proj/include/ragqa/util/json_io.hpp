#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ragqa {

using json = nlohmann::json;

namespace io {

/// Whole file as bytes. Throws MissingArtifactError when absent.
std::string read_file(const std::filesystem::path& path);

/// Creates parent directories. Throws StorageError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// One JSON value per non-blank line. Throws FormatError naming the line on bad input.
std::vector<json> read_jsonl(const std::filesystem::path& path);

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);

/// Serializes with sorted keys and two-space indent so reruns are byte-identical.
std::string dump_pretty(const json& j);

/// UTC, second precision: 2024-02-26T13:45:00Z
std::string rfc3339(std::chrono::system_clock::time_point tp);

}  // namespace io
}  // namespace ragqa
