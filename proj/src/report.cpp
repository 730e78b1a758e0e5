// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/report.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace idexpose {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Headers {
    const char* key;
    const char* label;
};

Headers headersFor(std::string_view dimension)
{
    if (dimension == "file_type")
        return {"File type", "Family"};
    if (dimension == "tld")
        return {"TLD", "Purpose"};
    if (dimension == "registered_domain")
        return {"Registered domain", "Owner"};
    if (dimension == "owner_tag")
        return {"Owner tag", ""};
    if (dimension == "query")
        return {"Query", "Engine"};
    if (dimension == "category_digit")
        return {"First digit", "Category"};
    if (dimension == "result_page")
        return {"Result page", ""};
    if (dimension == "province")
        return {"Code", "Province"};
    if (dimension == "district")
        return {"Code", "District"};
    if (dimension == "source_url_multiplicity")
        return {"Source URLs", ""};
    return {"Key", "Label"};
}

std::string withThousands(std::uint64_t v)
{
    auto digits = std::to_string(v);
    std::string out;
    const auto n = digits.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && (n - i) % 3 == 0)
            out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

std::string csvField(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string mdCell(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c == '|')
            out += "\\|";
        else if (c == '\n' || c == '\r')
            out.push_back(' ');
        else
            out.push_back(c);
    }
    return out;
}

void csvRow(std::ostream& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out << ',';
        out << csvField(cells[i]);
    }
    out << '\n';
}

void mdRow(std::ostream& out, const std::vector<std::string>& cells)
{
    out << '|';
    for (const auto& c : cells)
        out << ' ' << mdCell(c) << " |";
    out << '\n';
}

constexpr std::array<const char*, 9> kCsvColumns{"key",        "label",     "urls",       "files",  "fqdns",
                                                 "registered_domains", "unique_ids", "population", "percent"};

std::vector<std::string> aggregateCells(const AggregateRow& row, const Redaction& r)
{
    return {r.scrub(row.key),
            r.scrub(row.label),
            std::to_string(row.urls),
            std::to_string(row.files),
            std::to_string(row.fqdns),
            std::to_string(row.registered_domains),
            std::to_string(row.unique_ids),
            row.population ? std::to_string(*row.population) : "",
            row.percent ? row.percent->str() : ""};
}

void renderCsv(std::ostream& out, const ReportTable& table, const Redaction& r)
{
    if (auto* agg = std::get_if<AggregateTable>(&table.body)) {
        csvRow(out, {kCsvColumns.begin(), kCsvColumns.end()});
        for (const auto& row : agg->rows)
            csvRow(out, aggregateCells(row, r));
        return;
    }
    const auto& listing = std::get<ListingTable>(table.body);
    csvRow(out, listing.columns);
    for (const auto& row : listing.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row)
            cells.push_back(r.scrub(c));
        csvRow(out, cells);
    }
}

void renderMarkdownAggregate(std::ostream& out, const AggregateTable& t, const Redaction& r)
{
    const auto h = headersFor(t.dimension);
    bool anyLabel = false, anyPopulation = false, anyPercent = false;
    std::array<bool, 4> anyCount{};
    for (const auto& row : t.rows) {
        anyLabel |= !row.label.empty();
        anyPopulation |= row.population.has_value();
        anyPercent |= row.percent.has_value();
        anyCount[0] |= row.urls > 0;
        anyCount[1] |= row.files > 0;
        anyCount[2] |= row.fqdns > 0;
        anyCount[3] |= row.registered_domains > 0;
    }

    std::vector<std::string> header{h.key};
    std::string align = "|---|";
    if (anyLabel) {
        header.emplace_back(*h.label ? h.label : "Label");
        align += "---|";
    }
    const std::array<const char*, 4> countNames{"URLs", "Files", "FQDNs", "Registered domains"};
    for (std::size_t i = 0; i < 4; ++i) {
        if (anyCount[i]) {
            header.emplace_back(countNames[i]);
            align += "---:|";
        }
    }
    header.emplace_back("Unique IDs");
    align += "---:|";
    if (anyPopulation) {
        header.emplace_back("Population");
        align += "---:|";
    }
    if (anyPercent) {
        header.emplace_back("%");
        align += "---:|";
    }
    mdRow(out, header);
    out << align << '\n';

    for (const auto& row : t.rows) {
        std::vector<std::string> cells{r.scrub(row.key)};
        if (anyLabel)
            cells.push_back(r.scrub(row.label));
        const std::array<std::uint64_t, 4> counts{row.urls, row.files, row.fqdns, row.registered_domains};
        for (std::size_t i = 0; i < 4; ++i) {
            if (anyCount[i])
                cells.push_back(withThousands(counts[i]));
        }
        cells.push_back(withThousands(row.unique_ids));
        if (anyPopulation)
            cells.push_back(row.population ? withThousands(*row.population) : "");
        if (anyPercent)
            cells.push_back(row.percent ? row.percent->str() : "");
        mdRow(out, cells);
    }
    out << "\nTotal unique IDs: " << withThousands(t.total_unique_ids) << '\n';
}

void renderMarkdownListing(std::ostream& out, const ListingTable& t, const Redaction& r)
{
    mdRow(out, t.columns);
    out << '|';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << "---|";
    out << '\n';
    for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row)
            cells.push_back(r.scrub(c));
        mdRow(out, cells);
    }
    out << "\nRows: " << t.rows.size() << '\n';
}

ordered_json toJson(const ReportTable& table, const Redaction& r)
{
    ordered_json j;
    j["name"] = table.name;
    j["title"] = r.scrub(table.title);
    if (auto* agg = std::get_if<AggregateTable>(&table.body)) {
        j["kind"] = "aggregate";
        j["dimension"] = agg->dimension;
        j["total_unique_ids"] = agg->total_unique_ids;
        auto rows = ordered_json::array();
        for (const auto& row : agg->rows) {
            ordered_json jr;
            jr["key"] = r.scrub(row.key);
            jr["label"] = r.scrub(row.label);
            jr["urls"] = row.urls;
            jr["files"] = row.files;
            jr["fqdns"] = row.fqdns;
            jr["registered_domains"] = row.registered_domains;
            jr["unique_ids"] = row.unique_ids;
            if (row.population)
                jr["population"] = *row.population;
            if (row.percent)
                jr["percent"] = row.percent->str();
            rows.push_back(std::move(jr));
        }
        j["rows"] = std::move(rows);
    } else {
        const auto& listing = std::get<ListingTable>(table.body);
        j["kind"] = "listing";
        j["columns"] = listing.columns;
        auto rows = ordered_json::array();
        for (const auto& row : listing.rows) {
            auto jr = ordered_json::array();
            for (const auto& c : row)
                jr.push_back(r.scrub(c));
            rows.push_back(std::move(jr));
        }
        j["rows"] = std::move(rows);
    }
    return j;
}

Percent parsePercent(const std::string& s)
{
    const auto dot = s.find('.');
    const std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
    std::size_t used = 0;
    const auto scaled = std::stoll(digits, &used);
    if (used != digits.size())
        throw std::invalid_argument("malformed percent: " + s);
    return {scaled, decimals};
}

void writeFile(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.close();
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string_view formatName(ReportFormat format)
{
    switch (format) {
    case ReportFormat::Csv:
        return "csv";
    case ReportFormat::Json:
        return "json";
    case ReportFormat::Markdown:
        return "markdown";
    }
    return "csv";
}

std::optional<ReportFormat> parseReportFormat(std::string_view name)
{
    if (name == "csv")
        return ReportFormat::Csv;
    if (name == "json")
        return ReportFormat::Json;
    if (name == "markdown" || name == "md")
        return ReportFormat::Markdown;
    return std::nullopt;
}

std::string_view fileExtension(ReportFormat format)
{
    switch (format) {
    case ReportFormat::Csv:
        return "csv";
    case ReportFormat::Json:
        return "json";
    case ReportFormat::Markdown:
        return "md";
    }
    return "txt";
}

Redaction Redaction::on(std::string salt)
{
    if (salt.empty())
        throw std::invalid_argument("redaction needs a non-empty salt");
    return Redaction(true, std::move(salt));
}

Redaction Redaction::off(bool acceptRisk)
{
    if (!acceptRisk)
        throw UnsafeOutputError("unredacted output requires explicit risk acknowledgement");
    return Redaction(false, {});
}

std::string displayToken(const PseudonymToken& token)
{
    std::string out = "ID:" + token.salt_id + ":";
    for (std::size_t i = 0; i < token.token.size(); i += 8) {
        if (i)
            out.push_back('.');
        out += token.token.substr(i, 8);
    }
    return out;
}

std::string Redaction::tokenFor(std::string_view id) const
{
    if (!mEnabled)
        return std::string(id);
    return displayToken(pseudonymize(id, mSalt));
}

std::string Redaction::scrub(std::string_view text) const
{
    if (!mEnabled)
        return std::string(text);
    const auto candidates = find_candidates(text);
    if (candidates.empty())
        return std::string(text);
    std::string out;
    std::size_t pos = 0;
    for (const auto& c : candidates) {
        // Anything with a valid check digit is treated as an ID here, whether
        // or not its prefix is in the registry.
        if (c.normalized.back() - '0' != compute_checksum(std::string_view(c.normalized).substr(0, 12)))
            continue;
        out.append(text.substr(pos, c.source_span.begin - pos));
        out += tokenFor(c.normalized);
        pos = c.source_span.end;
    }
    out.append(text.substr(pos));
    return out;
}

std::string render_report(const std::vector<ReportTable>& tables, ReportFormat format, const Redaction& redaction)
{
    std::ostringstream out;
    switch (format) {
    case ReportFormat::Csv:
        if (tables.size() != 1)
            throw std::invalid_argument("csv output holds exactly one table");
        renderCsv(out, tables.front(), redaction);
        break;
    case ReportFormat::Json: {
        ordered_json j;
        j["redacted"] = redaction.enabled();
        if (redaction.enabled())
            j["salt_id"] = saltId(redaction.salt());
        auto arr = ordered_json::array();
        for (const auto& t : tables)
            arr.push_back(toJson(t, redaction));
        j["tables"] = std::move(arr);
        out << j.dump(2) << '\n';
        break;
    }
    case ReportFormat::Markdown:
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i)
                out << '\n';
            out << "## " << mdCell(redaction.scrub(tables[i].title)) << "\n\n";
            if (auto* agg = std::get_if<AggregateTable>(&tables[i].body))
                renderMarkdownAggregate(out, *agg, redaction);
            else
                renderMarkdownListing(out, std::get<ListingTable>(tables[i].body), redaction);
        }
        break;
    }
    return out.str();
}

std::vector<ReportTable> parse_report_json(std::string_view json)
{
    std::vector<ReportTable> out;
    try {
        const auto j = nlohmann::json::parse(json);
        for (const auto& jt : j.at("tables")) {
            ReportTable t;
            t.name = jt.at("name").get<std::string>();
            t.title = jt.at("title").get<std::string>();
            const auto kind = jt.at("kind").get<std::string>();
            if (kind == "aggregate") {
                AggregateTable agg;
                agg.dimension = jt.at("dimension").get<std::string>();
                agg.total_unique_ids = jt.at("total_unique_ids").get<std::uint64_t>();
                for (const auto& jr : jt.at("rows")) {
                    AggregateRow row;
                    row.key = jr.at("key").get<std::string>();
                    row.label = jr.at("label").get<std::string>();
                    row.urls = jr.at("urls").get<std::uint64_t>();
                    row.files = jr.at("files").get<std::uint64_t>();
                    row.fqdns = jr.at("fqdns").get<std::uint64_t>();
                    row.registered_domains = jr.at("registered_domains").get<std::uint64_t>();
                    row.unique_ids = jr.at("unique_ids").get<std::uint64_t>();
                    if (jr.contains("population"))
                        row.population = jr.at("population").get<std::uint64_t>();
                    if (jr.contains("percent"))
                        row.percent = parsePercent(jr.at("percent").get<std::string>());
                    agg.rows.push_back(std::move(row));
                }
                t.body = std::move(agg);
            } else if (kind == "listing") {
                ListingTable listing;
                listing.columns = jt.at("columns").get<std::vector<std::string>>();
                listing.rows = jt.at("rows").get<std::vector<std::vector<std::string>>>();
                t.body = std::move(listing);
            } else {
                throw std::invalid_argument("unknown table kind: " + kind);
            }
            out.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed report JSON: ") + e.what());
    }
    return out;
}

std::vector<std::filesystem::path> emit_report(const std::vector<ReportGroup>& groups,
                                               ReportFormat format,
                                               const Redaction& redaction,
                                               const std::filesystem::path& outDir)
{
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + outDir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    const auto ext = std::string(".") + std::string(fileExtension(format));
    for (const auto& g : groups) {
        if (format == ReportFormat::Csv) {
            for (const auto& t : g.tables) {
                const auto name = g.tables.size() == 1 ? g.name : t.name;
                auto path = outDir / (name + ext);
                writeFile(path, render_report({t}, format, redaction));
                written.push_back(std::move(path));
            }
        } else {
            auto path = outDir / (g.name + ext);
            writeFile(path, render_report(g.tables, format, redaction));
            written.push_back(std::move(path));
        }
    }
    return written;
}

ListingTable recordListing(const std::vector<ExposureRecord>& records)
{
    ListingTable t;
    t.columns = {"national_id", "category", "province", "district", "sha256", "url",
                 "tld",         "file_type", "query",  "engine",   "page",   "first_seen"};
    for (const auto& r : records) {
        t.rows.push_back({r.id, std::to_string(r.category), r.province_code, r.district_code, r.sha256, r.url,
                          r.domain.tldKey(), r.file_type, r.query, std::string(engineName(r.engine)),
                          std::to_string(r.page_number), formatTimestamp(r.first_seen)});
    }
    return t;
}

ListingTable diagnosticsListing(const std::vector<Diagnostic>& diagnostics)
{
    ListingTable t;
    t.columns = {"url", "reason"};
    for (const auto& d : diagnostics)
        t.rows.push_back({d.url, d.reason});
    return t;
}

const std::vector<std::string>& reportTableNames()
{
    static const std::vector<std::string> kNames{"filetype", "tld",   "geo",  "repeat",  "domain",     "owner",
                                                 "query",    "category", "page", "records", "diagnostics"};
    return kNames;
}

namespace {

ReportTable trimmed(std::string name, std::string title, AggregateTable t, std::size_t top)
{
    if (top && t.rows.size() > top)
        t.rows.resize(top);
    return {std::move(name), std::move(title), std::move(t)};
}

}  // namespace

ReportGroup build_report_group(std::string_view name,
                               const std::vector<ExposureRecord>& records,
                               const std::vector<Diagnostic>& diagnostics,
                               const GeoRegistry& registry,
                               const ReportOptions& options)
{
    const auto top = options.top;
    ReportGroup group{std::string(name), {}};
    if (name == "filetype") {
        group.tables.push_back(trimmed("filetype", "Exposure by file type", aggregate(records, Dimension::FileType), top));
    } else if (name == "tld") {
        group.tables.push_back(trimmed("tld", "Exposure by TLD", aggregate(records, Dimension::Tld), top));
    } else if (name == "domain") {
        group.tables.push_back(
            trimmed("domain", "Exposure by registered domain", aggregate(records, Dimension::RegisteredDomain), top));
    } else if (name == "owner") {
        group.tables.push_back(trimmed("owner", "Exposure by owner tag", aggregate(records, Dimension::OwnerTag), top));
    } else if (name == "query") {
        group.tables.push_back(trimmed("query", "Exposure by query", aggregate(records, Dimension::Query), top));
    } else if (name == "category") {
        group.tables.push_back(
            trimmed("category", "Exposure by first digit", aggregate(records, Dimension::CategoryDigit), top));
    } else if (name == "page") {
        group.tables.push_back(trimmed("page", "Exposure by result page", aggregate(records, Dimension::ResultPage), top));
    } else if (name == "geo") {
        auto [province, district] = geographic_report(records, registry, options.geo_order);
        group.tables.push_back(trimmed("geo_province", "Exposure by province", std::move(province), top));
        group.tables.push_back(trimmed("geo_district", "Exposure by district", std::move(district), top));
    } else if (name == "repeat") {
        group.tables.push_back(trimmed("repeat", "Source URLs per ID", repeat_exposure(records), top));
    } else if (name == "records") {
        group.tables.push_back({"records", "Exposure records", recordListing(records)});
    } else if (name == "diagnostics") {
        group.tables.push_back({"diagnostics", "Unclassified URLs", diagnosticsListing(diagnostics)});
    } else {
        throw std::invalid_argument("unknown table '" + std::string(name) + "'");
    }
    return group;
}

}  // namespace idexpose
