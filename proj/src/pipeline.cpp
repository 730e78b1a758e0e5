// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/pipeline.hpp"

#include <set>
#include <sstream>
#include <unordered_set>

#include "idexpose/idcore.hpp"

namespace idexpose {

std::size_t ingest_downloads(const std::vector<DownloadRecord>& downloads,
                             ResultStore& store,
                             const GeoRegistry& registry,
                             const std::vector<ExtractorSpec>& extractors,
                             std::size_t* extractionFailures)
{
    std::size_t added = 0;
    std::size_t failed = 0;
    std::unordered_set<std::string> visited;
    for (const auto& d : downloads) {
        if (d.status != DownloadStatus::Success || !d.sha256 || !visited.insert(*d.sha256).second)
            continue;
        const auto bytes = store.readObject(*d.sha256);
        ExtractedText text;
        try {
            text = extract_text(bytes, d.declared_type, extractors, *d.sha256);
        } catch (const ExtractionError& e) {
            if (e.failures().empty()) {
                store.recordExtractionFailure({*d.sha256, "", e.what()});
                ++failed;
            }
            for (const auto& f : e.failures()) {
                store.recordExtractionFailure({*d.sha256, f.extractor, f.reason});
                ++failed;
            }
            continue;
        }
        for (const auto& f : text.failures) {
            store.recordExtractionFailure({*d.sha256, f.extractor, f.reason});
            ++failed;
        }
        for (const auto& c : find_candidates(text.merged)) {
            if (!validate(c.normalized, registry).accepted())
                continue;
            StoredExposure e;
            e.national_id = c.normalized;
            e.sha256 = *d.sha256;
            e.url = d.hit.url;
            e.query = d.hit.query;
            e.engine = d.hit.engine;
            e.page_number = d.hit.page_number;
            e.file_type = d.declared_type;
            e.first_seen = d.completed_at;
            if (store.insertExposure(e))
                ++added;
        }
    }
    if (extractionFailures)
        *extractionFailures = failed;
    return added;
}

void fillStoreCounts(const ResultStore& store, ScanSummary& s)
{
    std::set<std::string> urls;
    for (const auto& h : store.hits())
        urls.insert(h.url);
    s.unique_urls = urls.size();

    std::set<std::string> documents;
    s.downloads_ok = s.downloads_failed = s.type_mismatches = 0;
    for (const auto& d : store.downloads()) {
        switch (d.status) {
        case DownloadStatus::Success:
            ++s.downloads_ok;
            documents.insert(*d.sha256);
            break;
        case DownloadStatus::Failed:
            ++s.downloads_failed;
            break;
        case DownloadStatus::TypeMismatch:
            ++s.type_mismatches;
            break;
        }
    }
    s.documents = documents.size();

    std::set<std::string> ids;
    std::set<std::string> withIds;
    const auto exposures = store.exposures();
    for (const auto& e : exposures) {
        ids.insert(e.national_id);
        withIds.insert(e.sha256);
    }
    s.exposures = exposures.size();
    s.unique_ids = ids.size();
    s.documents_with_ids = withIds.size();
}

ScanSummary run_scan(const QueryPlan& plan,
                     SearchProvider& provider,
                     Fetcher& fetcher,
                     ResultStore& store,
                     const GeoRegistry& registry,
                     const std::vector<ExtractorSpec>& extractors,
                     const CrawlConfig& config,
                     Clock& clock)
{
    ScanSummary s;
    s.queries = plan.queries.size();
    const auto execution = execute_plan(plan, provider, config, store, clock);
    s.pages_fetched = static_cast<std::size_t>(execution.pages_fetched);
    s.query_failures = execution.failures.size();
    const auto downloads = download_all(execution.hits, config, store, fetcher, clock);
    s.new_exposures = ingest_downloads(downloads, store, registry, extractors, &s.extraction_failures);
    fillStoreCounts(store, s);
    return s;
}

std::string formatSummary(const ScanSummary& s)
{
    std::ostringstream out;
    out << s.queries << " queries identified " << s.unique_urls << " unique URLs; " << s.unique_ids
        << " unique national ID numbers were extracted from " << s.documents_with_ids << " of " << s.documents
        << " documents.\n";
    out << "pages fetched: " << s.pages_fetched << ", query failures: " << s.query_failures << '\n';
    out << "downloads: " << s.downloads_ok << " ok, " << s.downloads_failed << " failed, " << s.type_mismatches
        << " type mismatch\n";
    out << "extraction failures: " << s.extraction_failures << ", stored exposures: " << s.exposures << '\n';
    return out.str();
}

}  // namespace idexpose
