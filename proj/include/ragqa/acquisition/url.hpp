#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ragqa::acquisition {

/// RFC 3986 URI reference split into components. `has_*` flags distinguish
/// an empty component ("http://x/a?") from an absent one ("http://x/a").
struct Url {
    std::string scheme;
    std::string host;
    std::string port;
    std::string path;
    std::string query;
    std::string fragment;
    bool has_authority = false;
    bool has_query = false;
    bool has_fragment = false;

    static std::optional<Url> parse(std::string_view text);

    std::string authority() const;
    std::string str() const;
    bool is_absolute() const noexcept { return !scheme.empty(); }
};

/// Reference resolution against an absolute base (RFC 3986 section 5.2),
/// including dot-segment removal.
std::optional<Url> resolve(const Url& base, std::string_view reference);

/// Canonical form used for dedup: lowercase scheme and host, default port
/// dropped, empty path becomes "/", fragment removed, empty query ("?")
/// removed. Returns nullopt for anything that is not an absolute URI with
/// an authority.
std::optional<std::string> canonicalize(std::string_view url);

/// True for absolute http(s) URIs with a host.
bool is_http_url(std::string_view url);

/// Lowercased host[:port] of an absolute URL, empty on failure.
std::string host_key(std::string_view url);

}  // namespace ragqa::acquisition
