// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "idexpose/analytics.hpp"
#include "idexpose/corpus.hpp"
#include "idexpose/extraction.hpp"
#include "idexpose/pipeline.hpp"
#include "support.hpp"

using namespace idexpose;
using testsupport::TempDir;

namespace {

CorpusSpec richSpec()
{
    CorpusSpec spec;
    spec.seed = 7;
    spec.planted = 120;
    spec.decoys = 60;
    spec.documents = 16;
    spec.formats = {"txt", "csv", "html", "pdf"};
    spec.repeat_every = 4;
    spec.legacy_encoding_document = true;
    spec.stub_command = std::string(IDEXPOSE_STUB_EXTRACTOR) + " {input}";
    return spec;
}

struct ScanRun {
    ScanSummary summary;
    std::set<std::string> found;
};

ScanRun scan(const GeneratedCorpus& corpus, ResultStore& store)
{
    const auto fixture = FixtureCorpus::load(corpus.index_path);
    FixtureProvider provider(fixture);
    FixtureFetcher fetcher(fixture);
    VirtualClock clock;
    CrawlConfig cfg;
    cfg.download_workers = 3;
    const auto extractors = loadExtractorConfig(corpus.extractors_path);
    ScanRun run;
    run.summary = run_scan(corpus.plan, provider, fetcher, store, testsupport::registry(), extractors, cfg, clock);
    for (const auto& e : store.exposures())
        run.found.insert(e.national_id);
    return run;
}

}  // namespace

TEST(Corpus, Deterministic)
{
    TempDir a("corpus-a"), b("corpus-b");
    auto spec = richSpec();
    spec.stub_command = "idexpose-stub-extract {input}";
    generate_corpus(spec, testsupport::registry(), a.path());
    generate_corpus(spec, testsupport::registry(), b.path());
    for (const auto& entry : std::filesystem::recursive_directory_iterator(a.path())) {
        if (!entry.is_regular_file())
            continue;
        const auto rel = std::filesystem::relative(entry.path(), a.path());
        EXPECT_EQ(testsupport::readFile(entry.path()), testsupport::readFile(b / rel)) << rel;
    }
}

TEST(Corpus, DecoysAreRejected)
{
    TempDir dir("decoys");
    const auto corpus = generate_corpus(richSpec(), testsupport::registry(), dir.path());
    ASSERT_EQ(corpus.decoys.size(), 60u);
    for (const auto& d : corpus.decoys) {
        for (const auto& c : find_candidates(d))
            EXPECT_FALSE(validate(c.normalized, testsupport::registry()).accepted() && !corpus.planted.count(c.normalized))
                << d;
    }
}

TEST(Pipeline, ExactRecoveryOnSyntheticCorpus)
{
    TempDir dir("pipeline");
    const auto corpus = generate_corpus(richSpec(), testsupport::registry(), dir / "corpus");
    ResultStore store(dir / "store.db");
    const auto run = scan(corpus, store);

    EXPECT_EQ(run.found, corpus.planted);
    EXPECT_EQ(run.summary.unique_ids, corpus.planted.size());
    EXPECT_EQ(run.summary.documents, corpus.document_count);
    EXPECT_EQ(run.summary.documents_with_ids, corpus.document_count);
    EXPECT_EQ(run.summary.extraction_failures, 0u);
    EXPECT_EQ(run.summary.downloads_failed, 0u);
    EXPECT_EQ(run.summary.query_failures, 0u);

    // Source-URL multiplicity per ID agrees with the generator's ground truth.
    std::map<std::string, std::set<std::string>> urls;
    for (const auto& e : store.exposures())
        urls[e.national_id].insert(e.url);
    EXPECT_EQ(urls, corpus.urls_per_id);

    std::vector<Diagnostic> diags;
    const auto records = buildRecords(store.exposures(), PublicSuffixList::builtin(), nullptr, &diags);
    EXPECT_TRUE(diags.empty());
    const auto repeat = repeat_exposure(records);
    std::uint64_t sum = 0;
    for (const auto& row : repeat.rows)
        sum += row.unique_ids;
    EXPECT_EQ(sum, corpus.planted.size());
    EXPECT_GE(repeat.rows.size(), 2u);
}

TEST(Pipeline, RerunIsIdempotent)
{
    TempDir dir("rerun");
    auto spec = richSpec();
    spec.planted = 40;
    spec.decoys = 10;
    spec.documents = 8;
    const auto corpus = generate_corpus(spec, testsupport::registry(), dir / "corpus");
    ResultStore store(dir / "store.db");
    const auto first = scan(corpus, store);
    const auto objects = store.objectCount();
    const auto second = scan(corpus, store);
    EXPECT_EQ(second.summary.new_exposures, 0u);
    EXPECT_EQ(second.found, first.found);
    EXPECT_EQ(store.objectCount(), objects);
    EXPECT_EQ(formatSummary(second.summary), formatSummary(first.summary));
}

TEST(Pipeline, ExtractionFailureIsRecordedNotFatal)
{
    TempDir dir("extractfail");
    auto spec = richSpec();
    spec.planted = 20;
    spec.decoys = 0;
    spec.documents = 4;
    const auto corpus = generate_corpus(spec, testsupport::registry(), dir / "corpus");
    const auto fixture = FixtureCorpus::load(corpus.index_path);
    FixtureProvider provider(fixture);
    FixtureFetcher fetcher(fixture);
    VirtualClock clock;
    ResultStore store(dir / "store.db");
    // No extractor for pdf: those documents fail, the rest still count.
    const auto summary = run_scan(corpus.plan, provider, fetcher, store, testsupport::registry(), defaultExtractors(),
                                  CrawlConfig{}, clock);
    EXPECT_EQ(summary.extraction_failures, 1u);
    EXPECT_EQ(store.extractionFailures().size(), 1u);
    EXPECT_GT(summary.unique_ids, 0u);
    EXPECT_LT(summary.unique_ids, corpus.planted.size());
}

TEST(Summary, Format)
{
    ScanSummary s;
    s.queries = 3;
    s.unique_urls = 12;
    s.unique_ids = 40;
    s.documents_with_ids = 11;
    s.documents = 12;
    const auto text = formatSummary(s);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "3 queries identified 12 unique URLs; 40 unique national ID numbers were extracted from 11 of 12 documents.");
}
