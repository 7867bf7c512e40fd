#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "ragqa/generation/qa_chain.hpp"
#include "ragqa/providers/provider.hpp"
#include "ragqa/retrieval/vector_index.hpp"
#include "ragqa/service/stats.hpp"
#include "ragqa/util/json_io.hpp"

namespace ragqa::service {

struct AskRequest {
    std::string question;
    bool rag = true;
    std::size_t top_k = 5;
    std::size_t fetch_k = 10;

    /// Throws ValidationError naming the offending field.
    static AskRequest from_json(const json& body);
    void validate() const;
};

/// answer, contexts[{chunk_id, text, source_path, sim_score, rerank_score}],
/// used_rag, rerank_degraded, truncated, timings.
json ask_response_json(const generation::SystemAnswer& answer, bool with_timings = true);

struct Reply {
    int status = 200;
    json body;
};

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    bool dev_mode = false;  // enables CORS for cors_origin
    std::string cors_origin = "http://localhost:5173";
    StorePaths stores;
    generation::ChainOptions chain;
};

/// Request handlers without the transport. Shares the index and providers
/// read-only, so concurrent calls are safe when the providers are.
class QaService {
public:
    QaService(retrieval::VectorIndex index, providers::ProviderSet providers, ServiceOptions options);
    QaService(const QaService&) = delete;
    QaService& operator=(const QaService&) = delete;

    Reply ask(const json& body) const;
    Reply health() const;
    Reply stats() const;

    const ServiceOptions& options() const noexcept { return options_; }

private:
    retrieval::VectorIndex index_;
    providers::ProviderSet providers_;
    ServiceOptions options_;
    std::unique_ptr<generation::QaChain> chain_;
};

/// httplib front end for QaService.
class HttpServer {
public:
    explicit HttpServer(const QaService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port; throws
    /// ValidationError with an actionable message when binding fails.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ragqa::service
