// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idexpose/analytics.hpp"

namespace idexpose {

enum class ReportFormat { Csv, Json, Markdown };

std::string_view formatName(ReportFormat format);
std::optional<ReportFormat> parseReportFormat(std::string_view name);
std::string_view fileExtension(ReportFormat format);

class UnsafeOutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Redaction {
public:
    /// Throws std::invalid_argument on an empty salt.
    static Redaction on(std::string salt);
    /// Throws UnsafeOutputError unless the risk is acknowledged.
    static Redaction off(bool acceptRisk);

    bool enabled() const { return mEnabled; }
    const std::string& salt() const { return mSalt; }

    /// Token text written in place of an ID.
    std::string tokenFor(std::string_view id) const;
    /// Replaces every checksum-valid 13-digit candidate in `text`.
    std::string scrub(std::string_view text) const;

private:
    Redaction(bool enabled, std::string salt) : mEnabled(enabled), mSalt(std::move(salt)) {}
    bool mEnabled;
    std::string mSalt;
};

/// Report form of a token: salt id and digest in 8-character groups, so the
/// output never holds a 13-digit run of its own.
std::string displayToken(const PseudonymToken& token);

/// Free-form rows, used for record listings and diagnostics.
struct ListingTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool operator==(const ListingTable&) const = default;
};

struct ReportTable {
    std::string name;   // machine name, e.g. "geo_province"
    std::string title;  // heading in markdown output
    std::variant<AggregateTable, ListingTable> body;
    bool operator==(const ReportTable&) const = default;
};

/// Renders tables into one document. CSV takes exactly one table.
std::string render_report(const std::vector<ReportTable>& tables, ReportFormat format, const Redaction& redaction);

/// Inverse of the JSON rendering.
std::vector<ReportTable> parse_report_json(std::string_view json);

/// One output file per report group; each group holds one or more tables.
/// CSV splits multi-table groups into one file per table. Returns the paths
/// written, in order. Throws std::runtime_error on write failure.
struct ReportGroup {
    std::string name;
    std::vector<ReportTable> tables;
};
std::vector<std::filesystem::path> emit_report(const std::vector<ReportGroup>& groups,
                                               ReportFormat format,
                                               const Redaction& redaction,
                                               const std::filesystem::path& outDir);

/// Group names accepted by build_report_group, in documentation order.
const std::vector<std::string>& reportTableNames();

struct ReportOptions {
    GeoOrder geo_order = GeoOrder::ByCount;
    std::size_t top = 0;  // keep the first N rows of each aggregate table; 0 keeps all
};

/// Tables for one named group ("geo" yields a province and a district table).
/// Throws std::invalid_argument on an unknown name.
ReportGroup build_report_group(std::string_view name,
                               const std::vector<ExposureRecord>& records,
                               const std::vector<Diagnostic>& diagnostics,
                               const GeoRegistry& registry,
                               const ReportOptions& options = {});

/// Record listing: one row per (id, document).
ListingTable recordListing(const std::vector<ExposureRecord>& records);
ListingTable diagnosticsListing(const std::vector<Diagnostic>& diagnostics);

}  // namespace idexpose
