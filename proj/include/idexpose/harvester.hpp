// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "idexpose/clock.hpp"
#include "idexpose/querygen.hpp"
#include "idexpose/records.hpp"
#include "idexpose/result_store.hpp"

namespace idexpose {

struct CrawlConfig {
    Millis search_delay{2000};
    Millis download_timeout{30000};
    int download_max_retry = 2;
    int max_pages = 10;
    std::set<std::string> accepted_types{"pdf", "xls", "xlsx", "doc", "docx", "txt", "csv", "html"};
    std::uint64_t max_bytes = 64ull * 1024 * 1024;
    int download_workers = 4;

    /// Throws std::invalid_argument when a field is out of range.
    void check() const;
};

const std::set<std::string>& knownFileTypes();

// Search side -------------------------------------------------------------

class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProviderResult {
    std::string url;
    int rank = 1;
};

struct SearchPage {
    std::vector<ProviderResult> results;
    int total_pages = 0;  // pages the engine reports for this query
};

class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    /// `page` is 1-based. Throws ProviderError on failure.
    virtual SearchPage search(Engine engine, const std::string& query, int page) = 0;
};

/// Corpus index for the fixture provider and fetcher:
///
///     { "queries": { "<rendered query>": [ {"url": .., "page": .., "rank": ..} ] },
///       "objects": { "<url>": {"path": .., "content_disposition": ..} } }
///
/// Object paths are relative to the index file's directory. Optional keys:
/// "failures" on an object ({"fail_first": N, "kind": "network"|"timeout"})
/// and "error_pages" on a query ([page, ...]) script transient faults.
struct FixtureCorpus {
    struct Entry {
        std::string url;
        int page = 1;
        int rank = 1;
    };
    struct Object {
        std::filesystem::path path;
        std::string content_disposition;
        int fail_first = 0;
        std::string fail_kind = "network";
    };

    std::map<std::string, std::vector<Entry>> queries;
    std::map<std::string, std::set<int>> error_pages;
    std::map<std::string, Object> objects;

    static FixtureCorpus load(const std::filesystem::path& indexPath);
    static FixtureCorpus parse(std::string_view json, const std::filesystem::path& baseDir);
};

class FixtureProvider final : public SearchProvider {
public:
    explicit FixtureProvider(FixtureCorpus corpus);
    SearchPage search(Engine engine, const std::string& query, int page) override;

    /// Calls to search(), in order.
    struct Call {
        Engine engine;
        std::string query;
        int page;
        TimePoint at;
    };
    void setClock(Clock* clock) { mClock = clock; }
    std::vector<Call> calls() const;

private:
    FixtureCorpus mCorpus;
    Clock* mClock = nullptr;
    mutable std::mutex mMutex;
    std::vector<Call> mCalls;
};

/// Queries a self-hosted search endpoint returning
/// {"results": [{"url": .., "rank": ..}], "total_pages": N}.
/// Construction fails unless an endpoint is configured and live access was
/// explicitly allowed.
class HttpSearchProvider final : public SearchProvider {
public:
    HttpSearchProvider(std::string endpoint, bool allowLive, Millis timeout = Millis(30000));
    SearchPage search(Engine engine, const std::string& query, int page) override;

private:
    std::string mEndpoint;
    Millis mTimeout;
};

// Download side -----------------------------------------------------------

enum class FetchStatus { Ok, Timeout, Network, TooLarge, HttpError };

struct FetchResult {
    FetchStatus status = FetchStatus::Network;
    int http_status = 0;
    std::string body;
    std::string content_disposition;
    std::string detail;
};

class Fetcher {
public:
    virtual ~Fetcher() = default;
    virtual FetchResult fetch(const std::string& url, Millis timeout, std::uint64_t maxBytes) = 0;
};

/// Serves the objects of a FixtureCorpus, honoring scripted failures.
class FixtureFetcher final : public Fetcher {
public:
    explicit FixtureFetcher(FixtureCorpus corpus);
    FetchResult fetch(const std::string& url, Millis timeout, std::uint64_t maxBytes) override;
    int attemptsFor(const std::string& url) const;

private:
    FixtureCorpus mCorpus;
    mutable std::mutex mMutex;
    std::map<std::string, int> mAttempts;
};

class HttpFetcher final : public Fetcher {
public:
    FetchResult fetch(const std::string& url, Millis timeout, std::uint64_t maxBytes) override;
};

// Pipeline ----------------------------------------------------------------

struct PlanExecution {
    std::vector<SearchHit> hits;
    std::vector<QueryFailure> failures;
    int pages_fetched = 0;
};

/// Runs every (query, engine) of the plan: pages 1..min(max_pages, reported
/// pages), idling `search_delay` before every page request after the first.
/// A provider error skips the rest of that query and is recorded.
PlanExecution execute_plan(const QueryPlan& plan,
                           SearchProvider& provider,
                           const CrawlConfig& config,
                           ResultStore& store,
                           Clock& clock);

/// At most 1 + download_max_retry attempts. Successful bodies are stored under
/// their SHA-256; a declared type outside accepted_types yields TypeMismatch
/// and the bytes are dropped.
DownloadRecord download(const SearchHit& hit,
                        const CrawlConfig& config,
                        ResultStore& store,
                        Fetcher& fetcher,
                        Clock& clock);

/// Downloads each distinct URL once (first hit wins) with up to
/// `download_workers` threads. Requests to the same host are spaced by at
/// least `search_delay`. URLs with a successful record in the store are
/// skipped and their stored record returned.
std::vector<DownloadRecord> download_all(const std::vector<SearchHit>& hits,
                                         const CrawlConfig& config,
                                         ResultStore& store,
                                         Fetcher& fetcher,
                                         Clock& clock);

/// Declared type: Content-Disposition filename extension, else URL path extension.
std::string declaredType(const std::string& url, const std::string& contentDisposition);

}  // namespace idexpose
