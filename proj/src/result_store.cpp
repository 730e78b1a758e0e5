// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/result_store.hpp"

#include <fcntl.h>
#include <sqlite3.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <sstream>

namespace idexpose {

namespace {

constexpr const char* kSchema = R"sql(
PRAGMA journal_mode = WAL;
CREATE TABLE IF NOT EXISTS hits (
    query TEXT NOT NULL,
    engine TEXT NOT NULL,
    page INTEGER NOT NULL,
    rank INTEGER NOT NULL,
    url TEXT NOT NULL,
    retrieved_at INTEGER NOT NULL,
    repeat INTEGER NOT NULL,
    UNIQUE (query, engine, page, rank, url)
);
CREATE TABLE IF NOT EXISTS objects (
    sha256 TEXT PRIMARY KEY,
    size_bytes INTEGER NOT NULL,
    path TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS downloads (
    url TEXT PRIMARY KEY,
    query TEXT NOT NULL,
    engine TEXT NOT NULL,
    page INTEGER NOT NULL,
    rank INTEGER NOT NULL,
    retrieved_at INTEGER NOT NULL,
    status TEXT NOT NULL,
    reason TEXT NOT NULL,
    sha256 TEXT,
    declared_type TEXT NOT NULL,
    stored_path TEXT NOT NULL,
    size_bytes INTEGER NOT NULL,
    attempts INTEGER NOT NULL,
    completed_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS query_errors (
    query TEXT NOT NULL,
    engine TEXT NOT NULL,
    page INTEGER NOT NULL,
    message TEXT NOT NULL,
    UNIQUE (query, engine, page)
);
CREATE TABLE IF NOT EXISTS extraction_failures (
    sha256 TEXT NOT NULL,
    extractor TEXT NOT NULL,
    detail TEXT NOT NULL,
    UNIQUE (sha256, extractor)
);
CREATE TABLE IF NOT EXISTS exposures (
    national_id TEXT NOT NULL,
    sha256 TEXT NOT NULL,
    url TEXT NOT NULL,
    query TEXT NOT NULL,
    engine TEXT NOT NULL,
    page INTEGER NOT NULL,
    file_type TEXT NOT NULL,
    first_seen INTEGER NOT NULL,
    PRIMARY KEY (national_id, sha256)
);
)sql";

class Statement {
public:
    Statement(sqlite3* db, const char* sql)
    {
        if (sqlite3_prepare_v2(db, sql, -1, &mStmt, nullptr) != SQLITE_OK)
            throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
    ~Statement() { sqlite3_finalize(mStmt); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int idx, std::string_view v)
    {
        sqlite3_bind_text(mStmt, idx, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
        return *this;
    }
    Statement& bind(int idx, std::int64_t v)
    {
        sqlite3_bind_int64(mStmt, idx, v);
        return *this;
    }
    Statement& bindNull(int idx)
    {
        sqlite3_bind_null(mStmt, idx);
        return *this;
    }

    // SQLITE_ROW -> true, SQLITE_DONE -> false.
    bool step()
    {
        int rc = sqlite3_step(mStmt);
        if (rc == SQLITE_ROW)
            return true;
        if (rc == SQLITE_DONE)
            return false;
        throw StoreError(std::string("step failed: ") + sqlite3_errmsg(sqlite3_db_handle(mStmt)));
    }

    std::string text(int col) const
    {
        auto p = sqlite3_column_text(mStmt, col);
        return p ? std::string(reinterpret_cast<const char*>(p), sqlite3_column_bytes(mStmt, col)) : std::string();
    }
    bool isNull(int col) const { return sqlite3_column_type(mStmt, col) == SQLITE_NULL; }
    std::int64_t integer(int col) const { return sqlite3_column_int64(mStmt, col); }

private:
    sqlite3_stmt* mStmt = nullptr;
};

std::int64_t toMillis(TimePoint t) { return t.time_since_epoch().count(); }
TimePoint fromMillis(std::int64_t ms) { return TimePoint(Millis(ms)); }

}  // namespace

std::string_view downloadStatusName(DownloadStatus status)
{
    switch (status) {
    case DownloadStatus::Success:
        return "success";
    case DownloadStatus::Failed:
        return "failed";
    case DownloadStatus::TypeMismatch:
        return "type_mismatch";
    }
    return "failed";
}

DownloadStatus parseDownloadStatus(std::string_view name)
{
    if (name == "success")
        return DownloadStatus::Success;
    if (name == "type_mismatch")
        return DownloadStatus::TypeMismatch;
    return DownloadStatus::Failed;
}

ResultStore::ResultStore(const std::filesystem::path& dbPath)
    : mPath(dbPath), mObjectDir(dbPath.string() + ".objects")
{
    if (dbPath.has_parent_path())
        std::filesystem::create_directories(dbPath.parent_path());
    std::filesystem::create_directories(mObjectDir);
    if (sqlite3_open(dbPath.c_str(), &mDb) != SQLITE_OK) {
        std::string msg = mDb ? sqlite3_errmsg(mDb) : "out of memory";
        sqlite3_close(mDb);
        throw StoreError("cannot open store " + dbPath.string() + ": " + msg);
    }
    sqlite3_busy_timeout(mDb, 5000);
    exec(kSchema);
}

ResultStore::~ResultStore() { sqlite3_close(mDb); }

void ResultStore::exec(const char* sql)
{
    char* err = nullptr;
    if (sqlite3_exec(mDb, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw StoreError("store error: " + msg);
    }
}

bool ResultStore::insertHit(const SearchHit& hit)
{
    std::lock_guard lock(mMutex);
    Statement st(mDb,
                 "INSERT OR IGNORE INTO hits (query, engine, page, rank, url, retrieved_at, repeat) "
                 "VALUES (?, ?, ?, ?, ?, ?, ?)");
    st.bind(1, hit.query)
        .bind(2, engineName(hit.engine))
        .bind(3, std::int64_t{hit.page_number})
        .bind(4, std::int64_t{hit.rank_on_page})
        .bind(5, hit.url)
        .bind(6, toMillis(hit.retrieved_at))
        .bind(7, std::int64_t{hit.repeat ? 1 : 0});
    st.step();
    return sqlite3_changes(mDb) > 0;
}

std::vector<SearchHit> ResultStore::hits() const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, "SELECT query, engine, page, rank, url, retrieved_at, repeat FROM hits ORDER BY rowid");
    std::vector<SearchHit> out;
    while (st.step()) {
        SearchHit h;
        h.query = st.text(0);
        h.engine = parseEngine(st.text(1));
        h.page_number = static_cast<int>(st.integer(2));
        h.rank_on_page = static_cast<int>(st.integer(3));
        h.url = st.text(4);
        h.retrieved_at = fromMillis(st.integer(5));
        h.repeat = st.integer(6) != 0;
        out.push_back(std::move(h));
    }
    return out;
}

void ResultStore::recordQueryFailure(const QueryFailure& failure)
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, "INSERT OR REPLACE INTO query_errors (query, engine, page, message) VALUES (?, ?, ?, ?)");
    st.bind(1, failure.query)
        .bind(2, engineName(failure.engine))
        .bind(3, std::int64_t{failure.page_number})
        .bind(4, failure.message);
    st.step();
}

std::vector<QueryFailure> ResultStore::queryFailures() const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, "SELECT query, engine, page, message FROM query_errors ORDER BY rowid");
    std::vector<QueryFailure> out;
    while (st.step())
        out.push_back({st.text(0), parseEngine(st.text(1)), static_cast<int>(st.integer(2)), st.text(3)});
    return out;
}

std::filesystem::path ResultStore::putObject(const std::string& sha256, std::string_view bytes)
{
    std::lock_guard lock(mMutex);
    const auto path = mObjectDir / sha256;
    if (!std::filesystem::exists(path)) {
        const auto tmp = mObjectDir / (sha256 + ".partial");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out)
                throw StoreError("cannot write object " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }
    Statement st(mDb, "INSERT OR IGNORE INTO objects (sha256, size_bytes, path) VALUES (?, ?, ?)");
    st.bind(1, sha256).bind(2, static_cast<std::int64_t>(bytes.size())).bind(3, path.string());
    st.step();
    return path;
}

std::string ResultStore::readObject(const std::string& sha256) const
{
    std::ifstream in(mObjectDir / sha256, std::ios::binary);
    if (!in)
        throw StoreError("object " + sha256 + " is not in the store");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t ResultStore::objectCount() const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, "SELECT COUNT(*) FROM objects");
    st.step();
    return static_cast<std::size_t>(st.integer(0));
}

void ResultStore::recordDownload(const DownloadRecord& r)
{
    std::lock_guard lock(mMutex);
    Statement st(mDb,
                 "INSERT OR REPLACE INTO downloads (url, query, engine, page, rank, retrieved_at, status, reason, "
                 "sha256, declared_type, stored_path, size_bytes, attempts, completed_at) "
                 "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)");
    st.bind(1, r.hit.url)
        .bind(2, r.hit.query)
        .bind(3, engineName(r.hit.engine))
        .bind(4, std::int64_t{r.hit.page_number})
        .bind(5, std::int64_t{r.hit.rank_on_page})
        .bind(6, toMillis(r.hit.retrieved_at))
        .bind(7, downloadStatusName(r.status))
        .bind(8, r.failure_reason);
    if (r.sha256)
        st.bind(9, *r.sha256);
    else
        st.bindNull(9);
    st.bind(10, r.declared_type)
        .bind(11, r.stored_path)
        .bind(12, static_cast<std::int64_t>(r.size_bytes))
        .bind(13, std::int64_t{r.attempts})
        .bind(14, toMillis(r.completed_at));
    st.step();
}

namespace {

DownloadRecord readDownload(const Statement& st)
{
    DownloadRecord r;
    r.hit.url = st.text(0);
    r.hit.query = st.text(1);
    r.hit.engine = parseEngine(st.text(2));
    r.hit.page_number = static_cast<int>(st.integer(3));
    r.hit.rank_on_page = static_cast<int>(st.integer(4));
    r.hit.retrieved_at = fromMillis(st.integer(5));
    r.status = parseDownloadStatus(st.text(6));
    r.failure_reason = st.text(7);
    if (!st.isNull(8))
        r.sha256 = st.text(8);
    r.declared_type = st.text(9);
    r.stored_path = st.text(10);
    r.size_bytes = static_cast<std::uint64_t>(st.integer(11));
    r.attempts = static_cast<int>(st.integer(12));
    r.completed_at = fromMillis(st.integer(13));
    return r;
}

constexpr const char* kDownloadColumns =
    "SELECT url, query, engine, page, rank, retrieved_at, status, reason, sha256, declared_type, stored_path, "
    "size_bytes, attempts, completed_at FROM downloads";

}  // namespace

std::optional<DownloadRecord> ResultStore::findDownload(const std::string& url) const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, (std::string(kDownloadColumns) + " WHERE url = ?").c_str());
    st.bind(1, url);
    if (!st.step())
        return std::nullopt;
    return readDownload(st);
}

std::vector<DownloadRecord> ResultStore::downloads() const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, (std::string(kDownloadColumns) + " ORDER BY rowid").c_str());
    std::vector<DownloadRecord> out;
    while (st.step())
        out.push_back(readDownload(st));
    return out;
}

void ResultStore::recordExtractionFailure(const ExtractionFailure& failure)
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, "INSERT OR REPLACE INTO extraction_failures (sha256, extractor, detail) VALUES (?, ?, ?)");
    st.bind(1, failure.sha256).bind(2, failure.extractor).bind(3, failure.detail);
    st.step();
}

std::vector<ExtractionFailure> ResultStore::extractionFailures() const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb, "SELECT sha256, extractor, detail FROM extraction_failures ORDER BY rowid");
    std::vector<ExtractionFailure> out;
    while (st.step())
        out.push_back({st.text(0), st.text(1), st.text(2)});
    return out;
}

bool ResultStore::insertExposure(const StoredExposure& e)
{
    std::lock_guard lock(mMutex);
    Statement st(mDb,
                 "INSERT OR IGNORE INTO exposures (national_id, sha256, url, query, engine, page, file_type, first_seen) "
                 "VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
    st.bind(1, e.national_id)
        .bind(2, e.sha256)
        .bind(3, e.url)
        .bind(4, e.query)
        .bind(5, engineName(e.engine))
        .bind(6, std::int64_t{e.page_number})
        .bind(7, e.file_type)
        .bind(8, toMillis(e.first_seen));
    st.step();
    return sqlite3_changes(mDb) > 0;
}

std::vector<StoredExposure> ResultStore::exposures() const
{
    std::lock_guard lock(mMutex);
    Statement st(mDb,
                 "SELECT national_id, sha256, url, query, engine, page, file_type, first_seen FROM exposures "
                 "ORDER BY rowid");
    std::vector<StoredExposure> out;
    while (st.step()) {
        StoredExposure e;
        e.national_id = st.text(0);
        e.sha256 = st.text(1);
        e.url = st.text(2);
        e.query = st.text(3);
        e.engine = parseEngine(st.text(4));
        e.page_number = static_cast<int>(st.integer(5));
        e.file_type = st.text(6);
        e.first_seen = fromMillis(st.integer(7));
        out.push_back(std::move(e));
    }
    return out;
}

StoreLock::StoreLock(const std::filesystem::path& dbPath)
{
    const auto lockPath = dbPath.string() + ".lock";
    if (dbPath.has_parent_path())
        std::filesystem::create_directories(dbPath.parent_path());
    mFd = ::open(lockPath.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (mFd < 0)
        throw StoreError("cannot open lock file " + lockPath + ": " + std::strerror(errno));
    if (::flock(mFd, LOCK_EX | LOCK_NB) != 0) {
        ::close(mFd);
        mFd = -1;
        throw StoreError("store " + dbPath.string() + " is locked by another process");
    }
}

StoreLock::~StoreLock()
{
    if (mFd >= 0) {
        ::flock(mFd, LOCK_UN);
        ::close(mFd);
    }
}

}  // namespace idexpose
