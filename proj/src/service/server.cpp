#include "ragqa/service/server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <chrono>

#include "ragqa/errors.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::service {
namespace {

constexpr std::size_t kMaxFetch = 100;

std::size_t size_field(const json& body, const char* key, std::size_t fallback) {
    if (!body.contains(key) || body.at(key).is_null()) return fallback;
    const json& v = body.at(key);
    if (!v.is_number_integer()) throw ValidationError(std::string(key) + " must be an integer");
    const auto n = v.get<long long>();
    if (n < 1) throw ValidationError(std::string(key) + " must be at least 1");
    return static_cast<std::size_t>(n);
}

Reply error_reply(int status, const std::string& message, json extra = json::object()) {
    extra["error"] = message;
    return {status, std::move(extra)};
}

}  // namespace

AskRequest AskRequest::from_json(const json& body) {
    if (!body.is_object()) throw ValidationError("request body must be a JSON object");
    AskRequest r;
    if (!body.contains("question") || !body.at("question").is_string()) {
        throw ValidationError("question must be a string");
    }
    r.question = body.at("question").get<std::string>();
    if (body.contains("rag") && !body.at("rag").is_null()) {
        if (!body.at("rag").is_boolean()) throw ValidationError("rag must be a boolean");
        r.rag = body.at("rag").get<bool>();
    }
    r.top_k = size_field(body, "top_k", r.top_k);
    r.fetch_k = size_field(body, "fetch_k", r.fetch_k);
    r.validate();
    return r;
}

void AskRequest::validate() const {
    if (text::trim(question).empty()) throw ValidationError("question is empty");
    if (top_k < 1) throw ValidationError("top_k must be at least 1");
    if (top_k > fetch_k) throw ValidationError("top_k must not exceed fetch_k");
    if (fetch_k > kMaxFetch) throw ValidationError("fetch_k must not exceed 100");
}

json ask_response_json(const generation::SystemAnswer& a, bool with_timings) {
    json ctx = json::array();
    for (const auto& c : a.contexts) {
        ctx.push_back({{"chunk_id", c.chunk_id},
                       {"text", c.text},
                       {"source_path", c.source_path},
                       {"sim_score", c.sim_score},
                       {"rerank_score", c.rerank_score ? json(*c.rerank_score) : json(nullptr)}});
    }
    json j{{"answer", a.answer},
           {"contexts", ctx},
           {"used_rag", a.used_rag},
           {"rerank_degraded", a.rerank_degraded},
           {"truncated", a.truncated}};
    if (!a.warning.empty()) j["warning"] = a.warning;
    if (with_timings) {
        j["timings"] = {{"embed_ms", a.timings.embed_ms},
                        {"search_ms", a.timings.search_ms},
                        {"rerank_ms", a.timings.rerank_ms},
                        {"generate_ms", a.timings.generate_ms},
                        {"total_ms", a.timings.total_ms}};
    }
    return j;
}

QaService::QaService(retrieval::VectorIndex index, providers::ProviderSet providers, ServiceOptions options)
    : index_(std::move(index)), providers_(std::move(providers)), options_(std::move(options)) {
    if (!providers_.embed || !providers_.generate) throw ValidationError("service needs embedding and generation providers");
    if (index_.size() > 0 && providers_.embed->dim() != 0 && index_.dim() != providers_.embed->dim()) {
        throw ValidationError("index dimension " + std::to_string(index_.dim()) + " does not match embedding provider (" +
                              std::to_string(providers_.embed->dim()) + "); rebuild the index");
    }
    chain_ = std::make_unique<generation::QaChain>(index_, *providers_.embed, providers_.rerank.get(),
                                                   *providers_.generate, options_.chain);
}

Reply QaService::ask(const json& body) const {
    AskRequest req;
    try {
        req = AskRequest::from_json(body);
    } catch (const ValidationError& e) {
        return error_reply(400, e.what());
    }
    try {
        if (!req.rag) return {200, ask_response_json(chain_->answer_baseline(req.question))};
        retrieval::RetrieveOptions ro = options_.chain.retrieve;
        ro.fetch_k = req.fetch_k;
        ro.final_k = req.top_k;
        return {200, ask_response_json(chain_->answer(req.question, ro))};
    } catch (const ValidationError& e) {
        return error_reply(400, e.what());
    } catch (const MissingArtifactError& e) {
        return error_reply(503, e.what());
    } catch (const generation::AnswerError& e) {
        // The evidence is still useful to the client.
        json partial = ask_response_json(e.partial());
        partial.erase("answer");
        return error_reply(502, e.what(), std::move(partial));
    } catch (const providers::ProviderError& e) {
        return error_reply(502, e.what());
    }
}

Reply QaService::health() const {
    return {200, {{"status", "ok"}, {"index_chunks", index_.size()}, {"providers", providers_.describe()}}};
}

Reply QaService::stats() const {
    json s = corpus_stats(options_.stores);
    s["index_chunks"] = index_.size();
    return {200, std::move(s)};
}

struct HttpServer::Impl {
    const QaService& service;
    httplib::Server server;

    explicit Impl(const QaService& s) : service(s) {}

    void send(httplib::Response& res, const Reply& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json; charset=utf-8");
    }
};

HttpServer::HttpServer(const QaService& service) : impl_(std::make_unique<Impl>(service)) {
    auto& svr = impl_->server;
    const auto& opts = service.options();

    // SO_REUSEADDR only: httplib's default SO_REUSEPORT would let a second
    // server share a port that is already taken.
    svr.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });

    if (opts.dev_mode) {
        const std::string origin = opts.cors_origin;
        svr.set_default_headers({{"Access-Control-Allow-Origin", origin},
                                 {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});
        svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    }

    svr.Post("/api/ask", [this](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error& e) {
            impl_->send(res, error_reply(400, std::string("malformed JSON: ") + e.what()));
            return;
        }
        impl_->send(res, impl_->service.ask(body));
    });
    svr.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
        impl_->send(res, impl_->service.health());
    });
    svr.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
        impl_->send(res, impl_->service.stats());
    });

    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            msg = e.what();
        } catch (...) {
        }
        spdlog::error("unhandled: {}", msg);
        res.status = 500;
        res.set_content(json{{"error", msg}}.dump(), "application/json; charset=utf-8");
    });
    svr.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} -> {} ({} bytes)", req.method, req.path, res.status, res.body.size());
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    auto& svr = impl_->server;
    int bound = -1;
    if (port == 0) {
        bound = svr.bind_to_any_port(host);
    } else if (svr.bind_to_port(host, port)) {
        bound = port;
    }
    if (bound < 0) {
        throw ValidationError("cannot bind " + host + ":" + std::to_string(port) +
                              " (port busy or address unavailable); pass --port with a free port");
    }
    return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace ragqa::service
