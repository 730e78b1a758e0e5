// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idexpose/georegistry.hpp"
#include "idexpose/idcore.hpp"
#include "idexpose/records.hpp"

namespace idexpose {

class ResultStore;

// Domain classification ---------------------------------------------------

/// Public suffix rules: plain ("co.th"), wildcard ("*.ck") and exception
/// ("!www.ck") lines; '//' comments. Matching follows the usual algorithm:
/// exceptions beat wildcards, longest rule wins, default rule "*".
class PublicSuffixList {
public:
    static PublicSuffixList parse(std::istream& in);
    static PublicSuffixList parse(std::string_view text);
    static PublicSuffixList loadFile(const std::filesystem::path& path);

    /// Thai second-level domains plus common generic and country suffixes.
    static const PublicSuffixList& builtin();

    std::string publicSuffix(std::string_view host) const;
    /// One label beneath the public suffix; nullopt when the host is itself a suffix.
    std::optional<std::string> registeredDomain(std::string_view host) const;

    std::size_t size() const { return mRules.size() + mWildcards.size() + mExceptions.size(); }

private:
    std::set<std::string, std::less<>> mRules;
    std::set<std::string, std::less<>> mWildcards;   // stored without "*."
    std::set<std::string, std::less<>> mExceptions;  // stored without "!"
};

/// Operator-maintained `registered_domain,tag` mapping.
class TagMap {
public:
    static TagMap parse(std::istream& in);
    static TagMap loadFile(const std::filesystem::path& path);

    void add(std::string domain, std::string tag);
    std::optional<std::string> lookup(std::string_view registeredDomain) const;
    bool empty() const { return mTags.empty(); }

private:
    std::map<std::string, std::string, std::less<>> mTags;
};

enum class TldClass { GoTh, AcTh, CoTh, MiTh, OrTh, InTh, NetTh, Com, Org, Net, Other, IpAddress };

struct DomainInfo {
    std::string url;
    std::string fqdn;
    std::optional<std::string> registered_domain;  // absent for IP literals
    TldClass tld_class = TldClass::Other;
    std::string other_label;                       // final label when tld_class == Other
    std::optional<std::string> owner_tag;

    /// Row key for TLD tables: "go.th", "com", "ac", ..., or "ip_address".
    std::string tldKey() const;
};

class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

DomainInfo classify_url(std::string_view url,
                        const PublicSuffixList& psl = PublicSuffixList::builtin(),
                        const TagMap* tags = nullptr);

// Exposure records --------------------------------------------------------

struct ExposureRecord {
    std::string id;  // 13 digits
    int category = 0;
    std::string province_code;
    std::string district_code;
    std::string sha256;  // source document
    std::string url;
    DomainInfo domain;
    std::string file_type;
    std::string query;
    Engine engine = Engine::Google;
    int page_number = 1;
    TimePoint first_seen{};
};

struct Diagnostic {
    std::string url;
    std::string reason;
};

/// Joins stored exposures with URL classification. Rows whose URL does not
/// classify land in `diagnostics` instead.
std::vector<ExposureRecord> buildRecords(const std::vector<StoredExposure>& stored,
                                         const PublicSuffixList& psl,
                                         const TagMap* tags,
                                         std::vector<Diagnostic>* diagnostics);

// Aggregation -------------------------------------------------------------

/// Decimal percentage held as an integer scaled by 10^decimals.
struct Percent {
    std::int64_t scaled = 0;
    int decimals = 2;

    std::string str() const;
    double value() const;
    bool operator==(const Percent&) const = default;
};

/// 100 * numerator / denominator, rounded half-up at `decimals` places.
Percent roundedPercent(std::uint64_t numerator, std::uint64_t denominator, int decimals);

struct AggregateRow {
    std::string key;
    std::string label;
    std::uint64_t urls = 0;
    std::uint64_t files = 0;
    std::uint64_t fqdns = 0;
    std::uint64_t registered_domains = 0;
    std::uint64_t unique_ids = 0;
    std::optional<std::uint64_t> population;
    std::optional<Percent> percent;

    bool operator==(const AggregateRow&) const = default;
};

struct AggregateTable {
    std::string dimension;
    std::vector<AggregateRow> rows;
    std::uint64_t total_unique_ids = 0;

    bool operator==(const AggregateTable&) const = default;
};

enum class Dimension { FileType, Tld, RegisteredDomain, OwnerTag, Query, CategoryDigit, ResultPage };

std::string_view dimensionName(Dimension d);
std::optional<Dimension> parseDimension(std::string_view name);

/// Rows keyed by the dimension, sorted by unique_ids descending then key.
AggregateTable aggregate(const std::vector<ExposureRecord>& records, Dimension dimension);

enum class GeoOrder { ByCount, ByPercent };

/// Province (digits 2-3) and district (digits 2-5) tables. Percent is
/// 100 * unique_ids / population at 2 decimals when a population is known.
std::pair<AggregateTable, AggregateTable> geographic_report(const std::vector<ExposureRecord>& records,
                                                            const GeoRegistry& registry,
                                                            GeoOrder order = GeoOrder::ByCount);

/// Rows keyed by the number of distinct source URLs per ID, highest
/// multiplicity first; percent of all unique IDs at 4 decimals.
AggregateTable repeat_exposure(const std::vector<ExposureRecord>& records);

}  // namespace idexpose
