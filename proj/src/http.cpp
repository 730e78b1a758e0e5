// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <nlohmann/json.hpp>

#include "idexpose/harvester.hpp"
#include "idexpose/url.hpp"

namespace idexpose {

namespace {

std::string originOf(const ParsedUrl& u)
{
    std::string host = u.host.find(':') != std::string::npos ? "[" + u.host + "]" : u.host;
    std::string origin = u.scheme + "://" + host;
    if (u.port)
        origin += ":" + std::to_string(*u.port);
    return origin;
}

void applyTimeout(httplib::Client& cli, Millis timeout)
{
    const auto secs = static_cast<time_t>(timeout.count() / 1000);
    const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
}

}  // namespace

HttpSearchProvider::HttpSearchProvider(std::string endpoint, bool allowLive, Millis timeout)
    : mEndpoint(std::move(endpoint)), mTimeout(timeout)
{
    if (!allowLive)
        throw ProviderError("live search provider is disabled; it requires the explicit unsafe flag");
    if (mEndpoint.empty())
        throw ProviderError("live search provider needs a configured endpoint");
    if (!parseUrl(mEndpoint))
        throw ProviderError("invalid search endpoint URL: " + mEndpoint);
}

SearchPage HttpSearchProvider::search(Engine engine, const std::string& query, int page)
{
    const auto u = *parseUrl(mEndpoint);
    httplib::Client cli(originOf(u));
    applyTimeout(cli, mTimeout);
    httplib::Params params{{"q", query}, {"engine", std::string(engineName(engine))}, {"page", std::to_string(page)}};
    auto res = cli.Get(u.path.empty() ? "/" : u.path, params, httplib::Headers{});
    if (!res)
        throw ProviderError("search request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProviderError("search endpoint returned HTTP " + std::to_string(res->status));
    SearchPage out;
    try {
        auto j = nlohmann::json::parse(res->body);
        out.total_pages = j.value("total_pages", 0);
        for (const auto& r : j.at("results"))
            out.results.push_back({r.at("url").get<std::string>(), r.value("rank", 1)});
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed search response: ") + e.what());
    }
    return out;
}

FetchResult HttpFetcher::fetch(const std::string& url, Millis timeout, std::uint64_t maxBytes)
{
    FetchResult out;
    auto u = parseUrl(url);
    if (!u) {
        out.status = FetchStatus::Network;
        out.detail = "invalid URL";
        return out;
    }
    httplib::Client cli(originOf(*u));
    applyTimeout(cli, timeout);
    cli.set_follow_location(true);

    std::string target = u->path.empty() ? "/" : u->path;
    if (!u->query.empty())
        target += "?" + u->query;

    bool tooLarge = false;
    auto res = cli.Get(
        target, httplib::Headers{},
        [&](const httplib::Response& response) {
            out.http_status = response.status;
            out.content_disposition = response.get_header_value("Content-Disposition");
            return true;
        },
        [&](const char* data, size_t len) {
            if (out.body.size() + len > maxBytes) {
                tooLarge = true;
                return false;
            }
            out.body.append(data, len);
            return true;
        });

    if (tooLarge) {
        out.status = FetchStatus::TooLarge;
        out.body.clear();
        return out;
    }
    if (!res) {
        const auto err = res.error();
        out.status = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) ? FetchStatus::Timeout
                                                                                               : FetchStatus::Network;
        out.detail = httplib::to_string(err);
        return out;
    }
    out.http_status = res->status;
    if (res->status != 200) {
        out.status = FetchStatus::HttpError;
        out.body.clear();
        return out;
    }
    out.status = FetchStatus::Ok;
    return out;
}

}  // namespace idexpose
