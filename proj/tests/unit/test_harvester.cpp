// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "idexpose/digest.hpp"
#include "idexpose/harvester.hpp"
#include "idexpose/url.hpp"
#include "support.hpp"

using namespace idexpose;
using testsupport::TempDir;

namespace {

struct Rig {
    TempDir dir{"harvest"};
    nlohmann::json index = {{"queries", nlohmann::json::object()}, {"objects", nlohmann::json::object()}};

    void addResults(const std::string& query, int count, const std::string& host = "a.go.th")
    {
        auto& list = index["queries"][query];
        for (int i = 0; i < count; ++i)
            list.push_back({{"url", "https://" + host + "/f" + std::to_string(i) + ".txt"},
                            {"page", i / 10 + 1},
                            {"rank", i % 10 + 1}});
    }

    void addObject(const std::string& url, const std::string& file, const std::string& body,
                   nlohmann::json extra = nlohmann::json::object())
    {
        testsupport::writeFile(dir / file, body);
        extra["path"] = file;
        index["objects"][url] = extra;
    }

    FixtureCorpus corpus() const { return FixtureCorpus::parse(index.dump(), dir.path()); }
};

CrawlConfig fastConfig()
{
    CrawlConfig c;
    c.search_delay = Millis(1500);
    c.download_workers = 1;
    return c;
}

SearchHit hitFor(const std::string& url)
{
    SearchHit h;
    h.query = "q";
    h.url = url;
    return h;
}

}  // namespace

TEST(Crawl, ConfigChecks)
{
    CrawlConfig c;
    EXPECT_NO_THROW(c.check());
    c.search_delay = Millis(0);
    EXPECT_THROW(c.check(), std::invalid_argument);
    c = {};
    c.max_pages = 0;
    EXPECT_THROW(c.check(), std::invalid_argument);
    c = {};
    c.accepted_types = {"exe"};
    EXPECT_THROW(c.check(), std::invalid_argument);
    c = {};
    c.download_max_retry = -1;
    EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(Crawl, SearchCallsAreSpacedByDelay)
{
    Rig rig;
    rig.addResults("q1", 23);
    rig.addResults("q2", 5);
    VirtualClock clock;
    FixtureProvider provider(rig.corpus());
    provider.setClock(&clock);
    ResultStore store(rig.dir / "store.db");
    QueryPlan plan;
    plan.queries = {"q1", "q2"};
    plan.engines = {Engine::Google, Engine::Bing};
    plan.max_pages = 10;
    const auto cfg = fastConfig();
    execute_plan(plan, provider, cfg, store, clock);

    const auto calls = provider.calls();
    ASSERT_GT(calls.size(), 1u);
    for (std::size_t i = 1; i < calls.size(); ++i)
        EXPECT_GE(calls[i].at - calls[i - 1].at, cfg.search_delay);
}

TEST(Crawl, PaginationFollowsReportedPages)
{
    Rig rig;
    rig.addResults("small", 23);
    rig.addResults("big", 200, "b.go.th");
    VirtualClock clock;
    FixtureProvider provider(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    QueryPlan plan;
    plan.queries = {"small"};
    plan.engines = {Engine::Google};
    plan.max_pages = 10;
    auto exec = execute_plan(plan, provider, fastConfig(), store, clock);
    EXPECT_EQ(exec.pages_fetched, 3);
    EXPECT_EQ(exec.hits.size(), 23u);

    plan.queries = {"big"};
    exec = execute_plan(plan, provider, fastConfig(), store, clock);
    EXPECT_EQ(exec.pages_fetched, 10);
    EXPECT_EQ(exec.hits.size(), 100u);

    auto cfg = fastConfig();
    cfg.max_pages = 4;
    exec = execute_plan(plan, provider, cfg, store, clock);
    EXPECT_EQ(exec.pages_fetched, 4);
}

TEST(Crawl, ProviderErrorSkipsRestOfQuery)
{
    Rig rig;
    rig.addResults("q", 35);
    rig.addResults("other", 3, "c.go.th");
    rig.index["error_pages"]["q"] = {2};
    VirtualClock clock;
    FixtureProvider provider(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    QueryPlan plan;
    plan.queries = {"q", "other"};
    plan.engines = {Engine::Google};
    const auto exec = execute_plan(plan, provider, fastConfig(), store, clock);
    EXPECT_EQ(exec.pages_fetched, 2);
    ASSERT_EQ(exec.failures.size(), 1u);
    EXPECT_EQ(exec.failures[0].page_number, 2);
    EXPECT_EQ(store.queryFailures().size(), 1u);
    EXPECT_EQ(exec.hits.size(), 13u);
}

TEST(Crawl, RepeatUrlsFlagged)
{
    Rig rig;
    rig.addResults("q1", 3);
    rig.addResults("q2", 2);
    VirtualClock clock;
    FixtureProvider provider(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    QueryPlan plan;
    plan.queries = {"q1", "q2"};
    plan.engines = {Engine::Google};
    const auto exec = execute_plan(plan, provider, fastConfig(), store, clock);
    ASSERT_EQ(exec.hits.size(), 5u);
    EXPECT_FALSE(exec.hits[0].repeat);
    EXPECT_TRUE(exec.hits[3].repeat);
    EXPECT_TRUE(exec.hits[4].repeat);
}

TEST(Download, RetriesWithinBudget)
{
    Rig rig;
    rig.addObject("https://a.go.th/x.txt", "x.txt", "hello", {{"failures", {{"fail_first", 2}}}});
    rig.addObject("https://a.go.th/y.txt", "y.txt", "world", {{"failures", {{"fail_first", 3}, {"kind", "timeout"}}}});
    VirtualClock clock;
    FixtureFetcher fetcher(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    auto cfg = fastConfig();
    cfg.download_max_retry = 2;

    const auto ok = download(hitFor("https://a.go.th/x.txt"), cfg, store, fetcher, clock);
    EXPECT_EQ(ok.status, DownloadStatus::Success);
    EXPECT_EQ(ok.attempts, 3);
    EXPECT_EQ(ok.sha256, sha256Hex("hello"));

    const auto bad = download(hitFor("https://a.go.th/y.txt"), cfg, store, fetcher, clock);
    EXPECT_EQ(bad.status, DownloadStatus::Failed);
    EXPECT_EQ(bad.attempts, 3);
    EXPECT_EQ(bad.failure_reason, "timeout");
    EXPECT_FALSE(bad.sha256);
}

TEST(Download, ClientErrorsAndLimits)
{
    Rig rig;
    rig.addObject("https://a.go.th/big.pdf", "big.pdf", std::string(100, 'x'));
    VirtualClock clock;
    FixtureFetcher fetcher(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    auto cfg = fastConfig();

    const auto missing = download(hitFor("https://a.go.th/none.pdf"), cfg, store, fetcher, clock);
    EXPECT_EQ(missing.failure_reason, "http_404");
    EXPECT_EQ(missing.attempts, 1);

    cfg.max_bytes = 10;
    const auto large = download(hitFor("https://a.go.th/big.pdf"), cfg, store, fetcher, clock);
    EXPECT_EQ(large.failure_reason, "too_large");
    EXPECT_EQ(store.objectCount(), 0u);
}

TEST(Download, TypeMismatchDropsBytes)
{
    Rig rig;
    rig.addObject("https://a.go.th/run.exe", "run.exe", "MZ");
    rig.addObject("https://a.go.th/download.php?id=4", "d.bin", "a,b\n", {{"content_disposition", "attachment; filename=\"list.csv\""}});
    VirtualClock clock;
    FixtureFetcher fetcher(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    const auto cfg = fastConfig();

    const auto exe = download(hitFor("https://a.go.th/run.exe"), cfg, store, fetcher, clock);
    EXPECT_EQ(exe.status, DownloadStatus::TypeMismatch);
    EXPECT_EQ(exe.declared_type, "exe");
    EXPECT_EQ(store.objectCount(), 0u);

    const auto php = download(hitFor("https://a.go.th/download.php?id=4"), cfg, store, fetcher, clock);
    EXPECT_EQ(php.status, DownloadStatus::Success);
    EXPECT_EQ(php.declared_type, "csv");
}

TEST(Download, ContentAddressedAndIdempotent)
{
    Rig rig;
    rig.addObject("https://a.go.th/1.txt", "1.txt", "same bytes");
    rig.addObject("https://b.go.th/2.txt", "2.txt", "same bytes");
    rig.addObject("https://c.go.th/3.txt", "3.txt", "other bytes");
    VirtualClock clock;
    FixtureFetcher fetcher(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    auto cfg = fastConfig();
    cfg.download_workers = 3;
    const std::vector<SearchHit> hits{hitFor("https://a.go.th/1.txt"), hitFor("https://b.go.th/2.txt"),
                                      hitFor("https://c.go.th/3.txt"), hitFor("https://a.go.th/1.txt")};

    const auto first = download_all(hits, cfg, store, fetcher, clock);
    ASSERT_EQ(first.size(), 3u);
    EXPECT_EQ(first[0].sha256, first[1].sha256);
    EXPECT_EQ(store.objectCount(), 2u);
    EXPECT_EQ(store.readObject(*first[2].sha256), "other bytes");

    const auto second = download_all(hits, cfg, store, fetcher, clock);
    EXPECT_EQ(store.objectCount(), 2u);
    EXPECT_EQ(fetcher.attemptsFor("https://a.go.th/1.txt"), 1);
    for (std::size_t i = 0; i < first.size(); ++i)
        EXPECT_EQ(second[i].sha256, first[i].sha256);
    EXPECT_EQ(store.downloads().size(), 3u);
}

TEST(Download, SameHostRequestsSpaced)
{
    Rig rig;
    for (int i = 0; i < 4; ++i)
        rig.addObject("https://a.go.th/" + std::to_string(i) + ".txt", std::to_string(i) + ".txt", std::to_string(i));
    VirtualClock clock;
    FixtureFetcher fetcher(rig.corpus());
    ResultStore store(rig.dir / "store.db");
    auto cfg = fastConfig();
    std::vector<SearchHit> hits;
    for (int i = 0; i < 4; ++i)
        hits.push_back(hitFor("https://a.go.th/" + std::to_string(i) + ".txt"));
    const auto start = clock.now();
    const auto recs = download_all(hits, cfg, store, fetcher, clock);
    EXPECT_GE(clock.now() - start, 3 * cfg.search_delay);
    for (std::size_t i = 1; i < recs.size(); ++i)
        EXPECT_GE(recs[i].completed_at - recs[i - 1].completed_at, cfg.search_delay);
}

TEST(Store, HitsAndExposuresDeduplicate)
{
    TempDir dir("store");
    ResultStore store(dir / "s.db");
    SearchHit h = hitFor("https://a.go.th/x.pdf");
    EXPECT_TRUE(store.insertHit(h));
    EXPECT_FALSE(store.insertHit(h));
    StoredExposure e{"1100100000018", sha256Hex("x"), h.url, "q", Engine::Google, 1, "pdf", {}};
    EXPECT_TRUE(store.insertExposure(e));
    EXPECT_FALSE(store.insertExposure(e));
    EXPECT_EQ(store.exposures().size(), 1u);
}

TEST(Store, LockIsExclusive)
{
    TempDir dir("lock");
    StoreLock first(dir / "s.db");
    EXPECT_THROW(StoreLock(dir / "s.db"), StoreError);
}

TEST(Url, ParsingAndExtensions)
{
    const auto u = parseUrl("HTTP://WWW.Baac.or.th:8080/Files/List.XLSX?x=1");
    ASSERT_TRUE(u);
    EXPECT_EQ(u->scheme, "http");
    EXPECT_EQ(u->host, "www.baac.or.th");
    EXPECT_EQ(u->port, 8080);
    EXPECT_EQ(pathExtension(u->path), "xlsx");
    EXPECT_TRUE(parseUrl("http://122.154.253.83/a.pdf")->host_is_ip);
    EXPECT_FALSE(parseUrl("not a url"));
    EXPECT_FALSE(parseUrl("ftp://x.th/a"));
    EXPECT_EQ(contentDispositionExtension("attachment; filename=\"report.PDF\""), "pdf");
    EXPECT_EQ(declaredType("https://x.th/download.php", ""), "php");
}
