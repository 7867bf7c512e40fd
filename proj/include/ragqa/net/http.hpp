#pragma once

#include <chrono>
#include <string>

namespace ragqa::net {

struct HttpOptions {
    std::chrono::milliseconds timeout{10000};
    std::string user_agent = "ragqa/1.0";
    bool follow_redirects = true;
};

struct HttpResponse {
    int status = 0;  // 0 means the request never produced a response
    std::string body;
    std::string content_type;
    std::string error;  // transport error description when status == 0

    bool transport_failed() const noexcept { return status == 0; }
    bool ok() const noexcept { return status >= 200 && status < 300; }
};

HttpResponse http_get(const std::string& url, const HttpOptions& opts = {});
HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const HttpOptions& opts = {});

}  // namespace ragqa::net
