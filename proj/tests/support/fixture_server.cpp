#include "fixture_server.hpp"

#include <httplib.h>

#include <atomic>
#include <random>
#include <stdexcept>

namespace ragqa::testing {

LocalServer::LocalServer() : server_(std::make_unique<httplib::Server>()) {}

LocalServer::~LocalServer() {
    if (server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void LocalServer::mount(const std::filesystem::path& dir) {
    if (!server_->set_mount_point("/", dir.string())) throw std::runtime_error("cannot mount " + dir.string());
}

void LocalServer::start() {
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind a test port");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

std::string LocalServer::url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
}

std::filesystem::path fixture_dir() { return RAGQA_FIXTURE_DIR; }

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto p = std::filesystem::temp_directory_path() /
                 (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        if (std::filesystem::create_directories(p)) {
            path_ = p;
            return;
        }
    }
    throw std::runtime_error("cannot create a temp dir");
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace ragqa::testing
