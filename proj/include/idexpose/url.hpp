// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace idexpose {

struct ParsedUrl {
    std::string scheme;  // lowercase
    std::string host;    // lowercase; IPv6 literals without brackets
    std::optional<int> port;
    std::string path;    // begins with '/' (or empty)
    std::string query;   // without '?'
    bool host_is_ip = false;
};

/// Minimal absolute http(s) URL parser. Returns nullopt for anything else.
std::optional<ParsedUrl> parseUrl(std::string_view url);

bool isIpv4Literal(std::string_view host);

/// Lowercased extension of the last path segment, without the dot; empty
/// when there is none.
std::string pathExtension(std::string_view path);

/// Extension of the filename carried by a Content-Disposition header value
/// (filename*= preferred over filename=); empty when absent.
std::string contentDispositionExtension(std::string_view header);

}  // namespace idexpose
