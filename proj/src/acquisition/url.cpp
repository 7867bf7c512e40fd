#include "ragqa/acquisition/url.hpp"

#include <cctype>
#include <vector>

#include "ragqa/util/text.hpp"

namespace ragqa::acquisition {
namespace {

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (const char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
            return false;
        }
    }
    return true;
}

std::string remove_dot_segments(std::string_view input) {
    std::vector<std::string_view> out;
    const bool absolute = !input.empty() && input.front() == '/';
    std::size_t i = absolute ? 1 : 0;
    bool trailing_slash = false;
    while (i <= input.size()) {
        const std::size_t next = input.find('/', i);
        const std::size_t end = next == std::string_view::npos ? input.size() : next;
        const std::string_view seg = input.substr(i, end - i);
        const bool last = next == std::string_view::npos;
        if (seg == ".") {
            trailing_slash = last;
        } else if (seg == "..") {
            if (!out.empty()) out.pop_back();
            trailing_slash = last;
        } else {
            out.push_back(seg);
            trailing_slash = false;
        }
        if (last) break;
        i = next + 1;
    }
    std::string result = absolute ? "/" : "";
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k) result.push_back('/');
        result.append(out[k]);
    }
    if (trailing_slash && (result.empty() || result.back() != '/')) result.push_back('/');
    return result;
}

std::string merge_paths(const Url& base, std::string_view ref_path) {
    if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
    const auto slash = base.path.rfind('/');
    if (slash == std::string::npos) return std::string(ref_path);
    return base.path.substr(0, slash + 1) + std::string(ref_path);
}

}  // namespace

std::optional<Url> Url::parse(std::string_view text) {
    text = text::trim(text);
    Url u;
    std::size_t pos = 0;

    const auto colon = text.find(':');
    const auto delim = text.find_first_of("/?#");
    if (colon != std::string_view::npos && (delim == std::string_view::npos || colon < delim)) {
        const auto scheme = text.substr(0, colon);
        if (!valid_scheme(scheme)) return std::nullopt;
        u.scheme = text::to_lower_ascii(scheme);
        pos = colon + 1;
    }

    if (text.substr(pos, 2) == "//") {
        u.has_authority = true;
        pos += 2;
        const auto end = text.find_first_of("/?#", pos);
        std::string_view authority =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end;
        if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
            authority = authority.substr(at + 1);
        }
        std::size_t port_sep = std::string_view::npos;
        if (!authority.empty() && authority.front() == '[') {
            const auto close = authority.find(']');
            if (close == std::string_view::npos) return std::nullopt;
            if (close + 1 < authority.size() && authority[close + 1] == ':') port_sep = close + 1;
        } else {
            port_sep = authority.rfind(':');
        }
        if (port_sep != std::string_view::npos) {
            u.port = std::string(authority.substr(port_sep + 1));
            authority = authority.substr(0, port_sep);
            for (const char c : u.port) {
                if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            }
        }
        u.host = text::to_lower_ascii(authority);
    }

    const auto path_end = text.find_first_of("?#", pos);
    u.path = std::string(text.substr(pos, path_end == std::string_view::npos ? std::string_view::npos
                                                                             : path_end - pos));
    pos = path_end == std::string_view::npos ? text.size() : path_end;

    if (pos < text.size() && text[pos] == '?') {
        u.has_query = true;
        const auto hash = text.find('#', pos);
        u.query = std::string(text.substr(pos + 1, hash == std::string_view::npos ? std::string_view::npos
                                                                                  : hash - pos - 1));
        pos = hash == std::string_view::npos ? text.size() : hash;
    }
    if (pos < text.size() && text[pos] == '#') {
        u.has_fragment = true;
        u.fragment = std::string(text.substr(pos + 1));
    }
    return u;
}

std::string Url::authority() const {
    return port.empty() ? host : host + ":" + port;
}

std::string Url::str() const {
    std::string out;
    if (!scheme.empty()) out += scheme + ":";
    if (has_authority) out += "//" + authority();
    out += path;
    if (has_query) out += "?" + query;
    if (has_fragment) out += "#" + fragment;
    return out;
}

std::optional<Url> resolve(const Url& base, std::string_view reference) {
    auto ref = Url::parse(reference);
    if (!ref) return std::nullopt;
    Url target;
    if (!ref->scheme.empty()) {
        target = *ref;
        target.path = remove_dot_segments(ref->path);
    } else {
        target.scheme = base.scheme;
        if (ref->has_authority) {
            target.has_authority = true;
            target.host = ref->host;
            target.port = ref->port;
            target.path = remove_dot_segments(ref->path);
            target.has_query = ref->has_query;
            target.query = ref->query;
        } else {
            target.has_authority = base.has_authority;
            target.host = base.host;
            target.port = base.port;
            if (ref->path.empty()) {
                target.path = base.path;
                target.has_query = ref->has_query ? true : base.has_query;
                target.query = ref->has_query ? ref->query : base.query;
            } else {
                target.path = ref->path.front() == '/' ? remove_dot_segments(ref->path)
                                                       : remove_dot_segments(merge_paths(base, ref->path));
                target.has_query = ref->has_query;
                target.query = ref->query;
            }
        }
    }
    target.has_fragment = ref->has_fragment;
    target.fragment = ref->fragment;
    return target;
}

std::optional<std::string> canonicalize(std::string_view url) {
    auto u = Url::parse(url);
    if (!u || !u->is_absolute() || !u->has_authority || u->host.empty()) return std::nullopt;
    if ((u->scheme == "http" && u->port == "80") || (u->scheme == "https" && u->port == "443")) {
        u->port.clear();
    }
    if (u->path.empty()) u->path = "/";
    u->path = remove_dot_segments(u->path);
    u->has_fragment = false;
    u->fragment.clear();
    if (u->has_query && u->query.empty()) u->has_query = false;
    return u->str();
}

bool is_http_url(std::string_view url) {
    const auto u = Url::parse(url);
    return u && (u->scheme == "http" || u->scheme == "https") && u->has_authority && !u->host.empty();
}

std::string host_key(std::string_view url) {
    const auto u = Url::parse(url);
    if (!u || !u->has_authority) return {};
    return u->authority();
}

}  // namespace ragqa::acquisition
