#include "ragqa/net/http.hpp"

#include <httplib.h>

namespace ragqa::net {
namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string target;  // path?query
};

bool split_url(const std::string& url, SplitUrl& out) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return false;
    const auto path_start = url.find_first_of("/?", scheme_end + 3);
    if (path_start == std::string::npos) {
        out.origin = url;
        out.target = "/";
    } else {
        out.origin = url.substr(0, path_start);
        out.target = url.substr(path_start);
        if (out.target.front() == '?') out.target.insert(out.target.begin(), '/');
    }
    return true;
}

template <typename Fn>
HttpResponse perform(const std::string& url, const HttpOptions& opts, Fn&& call) {
    HttpResponse resp;
    SplitUrl parts;
    if (!split_url(url, parts)) {
        resp.error = "malformed url: " + url;
        return resp;
    }
    httplib::Client client(parts.origin);
    if (!client.is_valid()) {
        resp.error = "unsupported url: " + url;
        return resp;
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(opts.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(opts.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    client.set_follow_location(opts.follow_redirects);
    client.enable_server_certificate_verification(true);

    httplib::Headers headers{{"User-Agent", opts.user_agent}};
    auto result = call(client, parts.target, headers);
    if (!result) {
        resp.error = httplib::to_string(result.error());
        return resp;
    }
    resp.status = result->status;
    resp.body = std::move(result->body);
    resp.content_type = result->get_header_value("Content-Type");
    return resp;
}

}  // namespace

HttpResponse http_get(const std::string& url, const HttpOptions& opts) {
    return perform(url, opts, [](httplib::Client& c, const std::string& target,
                                 const httplib::Headers& h) { return c.Get(target, h); });
}

HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const HttpOptions& opts) {
    return perform(url, opts, [&body](httplib::Client& c, const std::string& target,
                                      const httplib::Headers& h) {
        return c.Post(target, h, body, "application/json");
    });
}

}  // namespace ragqa::net
