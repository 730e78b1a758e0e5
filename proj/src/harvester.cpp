// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/harvester.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "idexpose/digest.hpp"
#include "idexpose/url.hpp"

namespace idexpose {

void CrawlConfig::check() const
{
    if (search_delay.count() <= 0)
        throw std::invalid_argument("search_delay must be positive");
    if (download_timeout.count() <= 0)
        throw std::invalid_argument("download_timeout must be positive");
    if (download_max_retry < 0)
        throw std::invalid_argument("download_max_retry must be nonnegative");
    if (max_pages < 1)
        throw std::invalid_argument("max_pages must be at least 1");
    if (download_workers < 1)
        throw std::invalid_argument("download_workers must be at least 1");
    if (max_bytes == 0)
        throw std::invalid_argument("max_bytes must be positive");
    for (const auto& t : accepted_types) {
        if (!knownFileTypes().count(t))
            throw std::invalid_argument("unknown accepted type '" + t + "'");
    }
}

const std::set<std::string>& knownFileTypes()
{
    static const std::set<std::string> kTypes{"pdf", "xls", "xlsx", "doc", "docx", "txt", "csv", "html"};
    return kTypes;
}

// Fixture corpus ----------------------------------------------------------

FixtureCorpus FixtureCorpus::load(const std::filesystem::path& indexPath)
{
    std::ifstream in(indexPath, std::ios::binary);
    if (!in)
        throw ProviderError("cannot open corpus index " + indexPath.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), indexPath.parent_path());
}

FixtureCorpus FixtureCorpus::parse(std::string_view json, const std::filesystem::path& baseDir)
{
    FixtureCorpus corpus;
    try {
        auto j = nlohmann::json::parse(json);
        for (const auto& [query, entries] : j.at("queries").items()) {
            auto& list = corpus.queries[query];
            for (const auto& e : entries) {
                Entry entry{e.at("url").get<std::string>(), e.value("page", 1), e.value("rank", 1)};
                if (entry.page < 1 || entry.rank < 1)
                    throw ProviderError("corpus entry for " + entry.url + " has a non-positive page or rank");
                list.push_back(std::move(entry));
            }
        }
        if (j.contains("error_pages")) {
            for (const auto& [query, pages] : j.at("error_pages").items())
                corpus.error_pages[query] = pages.get<std::set<int>>();
        }
        if (j.contains("objects")) {
            for (const auto& [url, o] : j.at("objects").items()) {
                Object obj;
                obj.path = baseDir / o.at("path").get<std::string>();
                obj.content_disposition = o.value("content_disposition", "");
                if (o.contains("failures")) {
                    obj.fail_first = o.at("failures").value("fail_first", 0);
                    obj.fail_kind = o.at("failures").value("kind", "network");
                }
                corpus.objects.emplace(url, std::move(obj));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("invalid corpus index: ") + e.what());
    }
    return corpus;
}

FixtureProvider::FixtureProvider(FixtureCorpus corpus) : mCorpus(std::move(corpus)) {}

SearchPage FixtureProvider::search(Engine engine, const std::string& query, int page)
{
    {
        std::lock_guard lock(mMutex);
        mCalls.push_back({engine, query, page, mClock ? mClock->now() : TimePoint{}});
    }
    if (auto it = mCorpus.error_pages.find(query); it != mCorpus.error_pages.end() && it->second.count(page))
        throw ProviderError("scripted provider failure on page " + std::to_string(page));

    SearchPage out;
    auto it = mCorpus.queries.find(query);
    if (it == mCorpus.queries.end())
        return out;
    for (const auto& e : it->second) {
        out.total_pages = std::max(out.total_pages, e.page);
        if (e.page == page)
            out.results.push_back({e.url, e.rank});
    }
    std::stable_sort(out.results.begin(), out.results.end(),
                     [](const ProviderResult& a, const ProviderResult& b) { return a.rank < b.rank; });
    return out;
}

std::vector<FixtureProvider::Call> FixtureProvider::calls() const
{
    std::lock_guard lock(mMutex);
    return mCalls;
}

FixtureFetcher::FixtureFetcher(FixtureCorpus corpus) : mCorpus(std::move(corpus)) {}

FetchResult FixtureFetcher::fetch(const std::string& url, Millis /*timeout*/, std::uint64_t maxBytes)
{
    int attempt = 0;
    {
        std::lock_guard lock(mMutex);
        attempt = ++mAttempts[url];
    }
    FetchResult r;
    auto it = mCorpus.objects.find(url);
    if (it == mCorpus.objects.end()) {
        r.status = FetchStatus::HttpError;
        r.http_status = 404;
        r.detail = "not in fixture corpus";
        return r;
    }
    const auto& obj = it->second;
    if (attempt <= obj.fail_first) {
        r.status = obj.fail_kind == "timeout" ? FetchStatus::Timeout : FetchStatus::Network;
        r.detail = "scripted failure " + std::to_string(attempt) + "/" + std::to_string(obj.fail_first);
        return r;
    }
    std::ifstream in(obj.path, std::ios::binary);
    if (!in) {
        r.status = FetchStatus::HttpError;
        r.http_status = 404;
        r.detail = "fixture file missing: " + obj.path.string();
        return r;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    r.body = buf.str();
    if (r.body.size() > maxBytes) {
        r.status = FetchStatus::TooLarge;
        r.body.clear();
        return r;
    }
    r.status = FetchStatus::Ok;
    r.http_status = 200;
    r.content_disposition = obj.content_disposition;
    return r;
}

int FixtureFetcher::attemptsFor(const std::string& url) const
{
    std::lock_guard lock(mMutex);
    auto it = mAttempts.find(url);
    return it == mAttempts.end() ? 0 : it->second;
}

// Pipeline ----------------------------------------------------------------

PlanExecution execute_plan(const QueryPlan& plan,
                           SearchProvider& provider,
                           const CrawlConfig& config,
                           ResultStore& store,
                           Clock& clock)
{
    config.check();
    const int pageCap = std::min(plan.max_pages, config.max_pages);
    PlanExecution out;
    std::unordered_set<std::string> seenUrls;
    bool firstRequest = true;

    for (const auto& query : plan.queries) {
        for (Engine engine : plan.engines) {
            int lastPage = pageCap;
            for (int page = 1; page <= lastPage; ++page) {
                if (!firstRequest)
                    clock.sleepFor(config.search_delay);
                firstRequest = false;

                SearchPage result;
                try {
                    result = provider.search(engine, query, page);
                } catch (const ProviderError& e) {
                    QueryFailure failure{query, engine, page, e.what()};
                    store.recordQueryFailure(failure);
                    out.failures.push_back(std::move(failure));
                    break;
                }
                ++out.pages_fetched;
                const auto retrievedAt = clock.now();
                lastPage = std::min(pageCap, result.total_pages);

                for (const auto& r : result.results) {
                    if (!parseUrl(r.url)) {
                        QueryFailure failure{query, engine, page, "invalid result URL: " + r.url};
                        store.recordQueryFailure(failure);
                        out.failures.push_back(std::move(failure));
                        continue;
                    }
                    SearchHit hit{query, engine, page, r.rank, r.url, retrievedAt, false};
                    hit.repeat = !seenUrls.insert(r.url).second;
                    store.insertHit(hit);
                    out.hits.push_back(std::move(hit));
                }
            }
        }
    }
    return out;
}

std::string declaredType(const std::string& url, const std::string& contentDisposition)
{
    auto ext = contentDispositionExtension(contentDisposition);
    if (!ext.empty())
        return ext;
    if (auto parsed = parseUrl(url))
        return pathExtension(parsed->path);
    return {};
}

DownloadRecord download(const SearchHit& hit,
                        const CrawlConfig& config,
                        ResultStore& store,
                        Fetcher& fetcher,
                        Clock& clock)
{
    DownloadRecord rec;
    rec.hit = hit;
    FetchResult result;
    const int maxAttempts = 1 + config.download_max_retry;
    for (int attempt = 1; attempt <= maxAttempts; ++attempt) {
        rec.attempts = attempt;
        result = fetcher.fetch(hit.url, config.download_timeout, config.max_bytes);
        if (result.status == FetchStatus::Ok || result.status == FetchStatus::TooLarge)
            break;
        if (result.status == FetchStatus::HttpError && result.http_status >= 400 && result.http_status < 500)
            break;
    }
    rec.completed_at = clock.now();

    switch (result.status) {
    case FetchStatus::Ok:
        break;
    case FetchStatus::Timeout:
        rec.failure_reason = "timeout";
        break;
    case FetchStatus::Network:
        rec.failure_reason = "network";
        break;
    case FetchStatus::TooLarge:
        rec.failure_reason = "too_large";
        break;
    case FetchStatus::HttpError:
        rec.failure_reason = "http_" + std::to_string(result.http_status);
        break;
    }
    if (result.status != FetchStatus::Ok) {
        rec.status = DownloadStatus::Failed;
        store.recordDownload(rec);
        return rec;
    }

    rec.declared_type = declaredType(hit.url, result.content_disposition);
    if (!config.accepted_types.count(rec.declared_type)) {
        rec.status = DownloadStatus::TypeMismatch;
        store.recordDownload(rec);
        return rec;
    }

    rec.status = DownloadStatus::Success;
    rec.sha256 = sha256Hex(result.body);
    rec.size_bytes = result.body.size();
    rec.stored_path = store.putObject(*rec.sha256, result.body).string();
    store.recordDownload(rec);
    return rec;
}

namespace {

/// Per-host minimum spacing between request starts.
class HostScheduler {
public:
    HostScheduler(Clock& clock, Millis spacing) : mClock(clock), mSpacing(spacing) {}

    void acquire(const std::string& host)
    {
        Millis wait{0};
        {
            std::lock_guard lock(mMutex);
            const auto now = mClock.now();
            auto& next = mNext[host];
            if (next > now)
                wait = next - now;
            next = std::max(next, now) + mSpacing;
        }
        if (wait.count() > 0)
            mClock.sleepFor(wait);
    }

private:
    Clock& mClock;
    Millis mSpacing;
    std::mutex mMutex;
    std::map<std::string, TimePoint> mNext;
};

}  // namespace

std::vector<DownloadRecord> download_all(const std::vector<SearchHit>& hits,
                                         const CrawlConfig& config,
                                         ResultStore& store,
                                         Fetcher& fetcher,
                                         Clock& clock)
{
    config.check();
    std::vector<const SearchHit*> work;
    std::unordered_set<std::string> seen;
    for (const auto& h : hits) {
        if (seen.insert(h.url).second)
            work.push_back(&h);
    }

    std::vector<DownloadRecord> out(work.size());
    HostScheduler scheduler(clock, config.search_delay);
    std::atomic<std::size_t> next{0};
    std::mutex errorMutex;
    std::exception_ptr firstError;

    auto worker = [&] {
        while (true) {
            const auto i = next.fetch_add(1);
            if (i >= work.size())
                return;
            try {
                const auto& hit = *work[i];
                if (auto existing = store.findDownload(hit.url); existing && existing->status == DownloadStatus::Success) {
                    out[i] = *existing;
                    continue;
                }
                auto parsed = parseUrl(hit.url);
                scheduler.acquire(parsed ? parsed->host : hit.url);
                out[i] = download(hit, config, store, fetcher, clock);
            } catch (...) {
                std::lock_guard lock(errorMutex);
                if (!firstError)
                    firstError = std::current_exception();
            }
        }
    };

    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.download_workers), work.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (firstError)
        std::rethrow_exception(firstError);
    return out;
}

}  // namespace idexpose
