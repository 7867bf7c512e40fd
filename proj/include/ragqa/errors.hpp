#pragma once

#include <stdexcept>
#include <string>

namespace ragqa {

/// Caller supplied something that violates an operation's precondition.
/// Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A required on-disk artifact (index, corpus, chunk store) is absent or unreadable.
/// Maps to CLI exit code 3.
class MissingArtifactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Write to the corpus or another output location failed.
class StorageError : public std::runtime_error {
public:
    StorageError(const std::string& path, const std::string& cause)
        : std::runtime_error("cannot write " + path + ": " + cause), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Malformed file content (index, jsonl, pdf).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ragqa
