// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "idexpose/clock.hpp"
#include "idexpose/querygen.hpp"

namespace idexpose {

/// One result URL as returned by a provider, with its provenance.
struct SearchHit {
    std::string query;
    Engine engine = Engine::Google;
    int page_number = 1;
    int rank_on_page = 1;
    std::string url;
    TimePoint retrieved_at{};
    bool repeat = false;  // URL already seen earlier in the same plan
};

enum class DownloadStatus { Success, Failed, TypeMismatch };

std::string_view downloadStatusName(DownloadStatus status);
DownloadStatus parseDownloadStatus(std::string_view name);

struct DownloadRecord {
    SearchHit hit;
    DownloadStatus status = DownloadStatus::Failed;
    std::string failure_reason;         // timeout | network | too_large | http_<code>; empty on success
    std::optional<std::string> sha256;  // present iff status == Success
    std::string declared_type;
    std::string stored_path;
    std::uint64_t size_bytes = 0;
    int attempts = 0;
    TimePoint completed_at{};
};

/// A validated ID occurrence as persisted: one row per (id, document digest).
struct StoredExposure {
    std::string national_id;
    std::string sha256;
    std::string url;
    std::string query;
    Engine engine = Engine::Google;
    int page_number = 1;
    std::string file_type;
    TimePoint first_seen{};
};

}  // namespace idexpose
