// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "idexpose/records.hpp"

struct sqlite3;

namespace idexpose {

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QueryFailure {
    std::string query;
    Engine engine = Engine::Google;
    int page_number = 1;
    std::string message;
};

struct ExtractionFailure {
    std::string sha256;
    std::string extractor;
    std::string detail;
};

/// Single-file SQLite store plus a content-addressed object directory.
///
/// Tables (see docs/store-schema.md):
///   hits(query, engine, page, rank, url, retrieved_at, repeat)
///   objects(sha256, size_bytes, path)
///   downloads(url, query, engine, page, rank, status, reason, sha256,
///             declared_type, stored_path, size_bytes, attempts, completed_at)
///   query_errors(query, engine, page, message)
///   extraction_failures(sha256, extractor, detail)
///   exposures(national_id, sha256, url, query, engine, page, file_type, first_seen)
///
/// Objects live in `<db path>.objects/<sha256>`. All methods are safe to call
/// from multiple threads; writes are serialized.
class ResultStore {
public:
    explicit ResultStore(const std::filesystem::path& dbPath);
    ~ResultStore();

    ResultStore(const ResultStore&) = delete;
    ResultStore& operator=(const ResultStore&) = delete;

    const std::filesystem::path& path() const { return mPath; }
    const std::filesystem::path& objectDir() const { return mObjectDir; }

    /// False when an identical (query, engine, page, rank, url) row exists.
    bool insertHit(const SearchHit& hit);
    std::vector<SearchHit> hits() const;

    void recordQueryFailure(const QueryFailure& failure);
    std::vector<QueryFailure> queryFailures() const;

    /// Writes `bytes` under their digest unless already present; returns the path.
    std::filesystem::path putObject(const std::string& sha256, std::string_view bytes);
    std::string readObject(const std::string& sha256) const;
    std::size_t objectCount() const;

    /// Keyed by URL; a later record for the same URL replaces the earlier one.
    void recordDownload(const DownloadRecord& record);
    std::optional<DownloadRecord> findDownload(const std::string& url) const;
    std::vector<DownloadRecord> downloads() const;

    void recordExtractionFailure(const ExtractionFailure& failure);
    std::vector<ExtractionFailure> extractionFailures() const;

    /// False when the (national_id, sha256) pair is already stored.
    bool insertExposure(const StoredExposure& exposure);
    std::vector<StoredExposure> exposures() const;

private:
    void exec(const char* sql);

    std::filesystem::path mPath;
    std::filesystem::path mObjectDir;
    sqlite3* mDb = nullptr;
    mutable std::mutex mMutex;
};

/// Exclusive advisory lock on `<db path>.lock`, held for the object's lifetime.
class StoreLock {
public:
    explicit StoreLock(const std::filesystem::path& dbPath);
    ~StoreLock();

    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    int mFd = -1;
};

}  // namespace idexpose
