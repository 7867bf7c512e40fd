#include "ragqa/providers/http_providers.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <thread>

#include "ragqa/net/http.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::providers {
namespace {

bool mentions_context_length(const std::string& body) {
    const std::string lower = text::to_lower_ascii(body);
    return lower.find("context") != std::string::npos &&
           (lower.find("length") != std::string::npos || lower.find("too long") != std::string::npos ||
            lower.find("exceed") != std::string::npos);
}

std::string join_url(const std::string& base, const std::string& path) {
    if (!base.empty() && base.back() == '/') return base.substr(0, base.size() - 1) + path;
    return base + path;
}

}  // namespace

json post_with_retries(const ProviderConfig& cfg, const std::string& path, const json& body) {
    const std::string url = join_url(cfg.endpoint, path);
    net::HttpOptions opts;
    opts.timeout = cfg.timeout;
    const std::string payload = body.dump();
    std::chrono::milliseconds delay{250};
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        const net::HttpResponse r = net::http_post_json(url, payload, opts);
        if (r.transport_failed()) {
            last_error = url + ": " + r.error;
            spdlog::warn("provider request failed (attempt {}): {}", attempt + 1, last_error);
            continue;
        }
        if (r.status == 413 || (r.status == 400 && mentions_context_length(r.body))) {
            throw ContextOverflowError(url + ": prompt exceeds the model context window; shrink the context budget");
        }
        if (r.status >= 500) {
            last_error = url + ": http status " + std::to_string(r.status);
            spdlog::warn("provider request failed (attempt {}): {}", attempt + 1, last_error);
            continue;
        }
        if (!r.ok()) throw ProviderError(url + ": http status " + std::to_string(r.status) + ": " + r.body, false);
        try {
            return json::parse(r.body);
        } catch (const json::exception& e) {
            throw ProviderError(url + ": response is not JSON: " + e.what(), false);
        }
    }
    throw ProviderError(last_error.empty() ? url + ": request failed" : last_error, true);
}

std::vector<Embedding> HttpEmbedding::embed_raw(const std::vector<std::string>& texts) {
    const json resp = post_with_retries(config(), "/embed", json{{"texts", texts}});
    if (!resp.contains("vectors") || !resp["vectors"].is_array()) {
        throw ProviderError("embed response has no vectors array", false);
    }
    std::vector<Embedding> out;
    for (const auto& v : resp["vectors"]) {
        if (!v.is_array()) throw ProviderError("embed response vector is not an array", false);
        Embedding e;
        e.reserve(v.size());
        for (const auto& x : v) {
            if (!x.is_number()) throw ProviderError("embed response has a non-numeric value", false);
            e.push_back(x.get<float>());
        }
        out.push_back(std::move(e));
    }
    if (resp.contains("dim") && resp["dim"].is_number_integer()) {
        const auto dim = resp["dim"].get<std::size_t>();
        for (const auto& e : out) {
            if (e.size() != dim) throw ProviderError("embed response dim disagrees with vector length", false);
        }
    }
    return out;
}

std::vector<double> HttpReranker::score_raw(const std::string& query, const std::vector<std::string>& candidates) {
    const json resp = post_with_retries(config(), "/rerank", json{{"query", query}, {"documents", candidates}});
    if (!resp.contains("scores") || !resp["scores"].is_array()) {
        throw ProviderError("rerank response has no scores array", false);
    }
    std::vector<double> out;
    for (const auto& s : resp["scores"]) {
        if (!s.is_number()) throw ProviderError("rerank response has a non-numeric score", false);
        out.push_back(s.get<double>());
    }
    return out;
}

std::string HttpGenerator::generate_raw(const std::string& prompt) {
    const auto& cfg = config();
    const json resp = post_with_retries(cfg, "/generate",
                                        json{{"prompt", prompt},
                                             {"max_new_tokens", cfg.max_new_tokens},
                                             {"temperature", cfg.temperature},
                                             {"seed", cfg.seed}});
    if (!resp.contains("text") || !resp["text"].is_string()) {
        throw ProviderError("generate response has no text field", false);
    }
    return resp["text"].get<std::string>();
}

}  // namespace ragqa::providers
