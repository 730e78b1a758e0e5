// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/url.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>

namespace idexpose {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool validHostChar(unsigned char c)
{
    return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c >= 0x80;
}

std::string extensionOf(std::string_view name)
{
    auto dot = name.rfind('.');
    if (dot == std::string_view::npos || dot + 1 == name.size())
        return {};
    return lower(name.substr(dot + 1));
}

}  // namespace

bool isIpv4Literal(std::string_view host)
{
    int parts = 0;
    std::size_t i = 0;
    while (i <= host.size()) {
        std::size_t start = i;
        while (i < host.size() && std::isdigit(static_cast<unsigned char>(host[i])))
            ++i;
        const auto len = i - start;
        if (len == 0 || len > 3)
            return false;
        if (std::stoi(std::string(host.substr(start, len))) > 255)
            return false;
        ++parts;
        if (i == host.size())
            break;
        if (host[i] != '.')
            return false;
        ++i;
    }
    return parts == 4;
}

std::optional<ParsedUrl> parseUrl(std::string_view url)
{
    auto sep = url.find("://");
    if (sep == std::string_view::npos || sep == 0)
        return std::nullopt;
    ParsedUrl out;
    out.scheme = lower(url.substr(0, sep));
    if (out.scheme != "http" && out.scheme != "https")
        return std::nullopt;

    auto rest = url.substr(sep + 3);
    auto authEnd = rest.find_first_of("/?#");
    auto authority = rest.substr(0, authEnd);
    auto tail = authEnd == std::string_view::npos ? std::string_view{} : rest.substr(authEnd);

    if (auto at = authority.rfind('@'); at != std::string_view::npos)
        authority = authority.substr(at + 1);

    std::string_view portText;
    if (!authority.empty() && authority.front() == '[') {
        auto close = authority.find(']');
        if (close == std::string_view::npos)
            return std::nullopt;
        std::string v6(authority.substr(1, close - 1));
        in6_addr addr{};
        if (inet_pton(AF_INET6, v6.c_str(), &addr) != 1)
            return std::nullopt;
        out.host = lower(v6);
        out.host_is_ip = true;
        auto after = authority.substr(close + 1);
        if (!after.empty()) {
            if (after.front() != ':')
                return std::nullopt;
            portText = after.substr(1);
        }
    } else {
        auto colon = authority.find(':');
        auto host = authority.substr(0, colon);
        if (colon != std::string_view::npos)
            portText = authority.substr(colon + 1);
        if (host.empty() || !std::all_of(host.begin(), host.end(), [](char c) { return validHostChar(c); }))
            return std::nullopt;
        if (host.front() == '.' || host.find("..") != std::string_view::npos)
            return std::nullopt;
        out.host = lower(host);
        if (out.host.back() == '.')
            out.host.pop_back();
        out.host_is_ip = isIpv4Literal(out.host);
    }
    if (out.host.empty())
        return std::nullopt;

    if (!portText.empty()) {
        if (portText.size() > 5 || !std::all_of(portText.begin(), portText.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return std::nullopt;
        int port = std::stoi(std::string(portText));
        if (port < 1 || port > 65535)
            return std::nullopt;
        out.port = port;
    }

    auto frag = tail.find('#');
    tail = tail.substr(0, frag);
    auto q = tail.find('?');
    out.path = std::string(tail.substr(0, q));
    if (q != std::string_view::npos)
        out.query = std::string(tail.substr(q + 1));
    return out;
}

std::string pathExtension(std::string_view path)
{
    auto cut = path.find_first_of("?#");
    path = path.substr(0, cut);
    auto slash = path.rfind('/');
    auto segment = slash == std::string_view::npos ? path : path.substr(slash + 1);
    return extensionOf(segment);
}

std::string contentDispositionExtension(std::string_view header)
{
    auto findParam = [&](std::string_view key) -> std::optional<std::string> {
        const auto lowered = lower(header);
        std::size_t pos = 0;
        while ((pos = lowered.find(key, pos)) != std::string::npos) {
            // Parameter names start the header or follow ';' / whitespace.
            if (pos == 0 || lowered[pos - 1] == ';' || lowered[pos - 1] == ' ' || lowered[pos - 1] == '\t') {
                auto value = header.substr(pos + key.size());
                auto end = value.find(';');
                value = value.substr(0, end);
                while (!value.empty() && (value.back() == ' ' || value.back() == '\t'))
                    value.remove_suffix(1);
                if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                    value = value.substr(1, value.size() - 2);
                return std::string(value);
            }
            pos += key.size();
        }
        return std::nullopt;
    };

    if (auto extended = findParam("filename*=")) {
        // RFC 5987: charset'lang'percent-encoded-name
        auto quote2 = extended->find('\'', extended->find('\'') + 1);
        std::string name = quote2 == std::string::npos ? *extended : extended->substr(quote2 + 1);
        auto ext = extensionOf(name);
        if (!ext.empty())
            return ext;
    }
    if (auto plain = findParam("filename="))
        return extensionOf(*plain);
    return {};
}

}  // namespace idexpose
