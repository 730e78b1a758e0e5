// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "idexpose/extraction.hpp"
#include "idexpose/georegistry.hpp"
#include "idexpose/harvester.hpp"
#include "idexpose/result_store.hpp"

namespace idexpose {

struct ScanSummary {
    std::size_t queries = 0;
    std::size_t pages_fetched = 0;
    std::size_t query_failures = 0;     // this run
    std::size_t unique_urls = 0;        // all hits in the store
    std::size_t downloads_ok = 0;       // distinct URLs stored successfully
    std::size_t downloads_failed = 0;
    std::size_t type_mismatches = 0;
    std::size_t documents = 0;          // distinct downloaded objects
    std::size_t documents_with_ids = 0;
    std::size_t extraction_failures = 0;  // this run
    std::size_t exposures = 0;          // (id, document) pairs in the store
    std::size_t unique_ids = 0;
    std::size_t new_exposures = 0;      // this run
};

/// Validates every candidate in the extracted text of each successful
/// download and stores the accepted IDs. Objects are visited once each, in
/// download order, so the first URL that produced a document is kept.
/// Returns the number of new (id, document) pairs.
std::size_t ingest_downloads(const std::vector<DownloadRecord>& downloads,
                             ResultStore& store,
                             const GeoRegistry& registry,
                             const std::vector<ExtractorSpec>& extractors,
                             std::size_t* extractionFailures = nullptr);

/// Search, download, extract, validate, persist.
ScanSummary run_scan(const QueryPlan& plan,
                     SearchProvider& provider,
                     Fetcher& fetcher,
                     ResultStore& store,
                     const GeoRegistry& registry,
                     const std::vector<ExtractorSpec>& extractors,
                     const CrawlConfig& config,
                     Clock& clock);

/// Store-wide counts; equal across reruns of the same plan.
void fillStoreCounts(const ResultStore& store, ScanSummary& summary);

std::string formatSummary(const ScanSummary& summary);

}  // namespace idexpose
