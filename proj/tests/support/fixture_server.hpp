#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace ragqa::testing {

/// httplib server on 127.0.0.1 and a free port, running on its own thread
/// until destroyed.
class LocalServer {
public:
    LocalServer();
    ~LocalServer();
    LocalServer(const LocalServer&) = delete;
    LocalServer& operator=(const LocalServer&) = delete;

    /// Route setup must happen before start().
    httplib::Server& routes() { return *server_; }

    /// Serves `dir` at "/" with extension-based content types.
    void mount(const std::filesystem::path& dir);

    void start();
    int port() const { return port_; }
    std::string url(const std::string& path = "/") const;

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

std::filesystem::path fixture_dir();

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "ragqa");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

}  // namespace ragqa::testing
