// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <cstdlib>

#include "idexpose/idcore.hpp"
#include "idexpose/report.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace idexpose;

namespace {

const std::filesystem::path kGoldenDir = IDEXPOSE_GOLDEN_DIR;

// Counts from the reference repeat-exposure table; percents come from the
// long-division oracle, not from the printed column.
AggregateTable repeatFixture()
{
    const std::vector<std::pair<int, std::uint64_t>> counts{
        {15, 5},    {13, 6},    {12, 56},   {11, 7},     {10, 7},     {9, 61},     {8, 79},
        {7, 774},   {6, 3795},  {5, 3332},  {4, 9584},   {3, 16229},  {2, 89890},  {1, 1139443}};
    AggregateTable t;
    t.dimension = "source_url_multiplicity";
    for (const auto& [m, c] : counts)
        t.total_unique_ids += c;
    for (const auto& [m, c] : counts) {
        AggregateRow row;
        row.key = std::to_string(m);
        row.unique_ids = c;
        const auto text = oracle::percent(c, t.total_unique_ids, 4);
        const auto dot = text.find('.');
        row.percent = Percent{std::stoll(text.substr(0, dot) + text.substr(dot + 1)), 4};
        t.rows.push_back(row);
    }
    return t;
}

void checkGolden(const std::string& name, const std::string& actual)
{
    const auto path = kGoldenDir / name;
    if (std::getenv("IDEXPOSE_UPDATE_GOLDEN")) {
        testsupport::writeFile(path, actual);
        return;
    }
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(testsupport::readFile(path), actual) << name;
}

std::vector<std::string> acceptedRuns(std::string_view bytes)
{
    std::vector<std::string> out;
    for (const auto& c : find_candidates(bytes)) {
        if (validate(c.normalized, testsupport::registry()).accepted())
            out.push_back(c.normalized);
    }
    return out;
}

ExposureRecord record(const std::string& id, const std::string& url)
{
    ExposureRecord r;
    r.id = id;
    r.category = id[0] - '0';
    r.province_code = id.substr(1, 2);
    r.district_code = id.substr(1, 4);
    r.sha256 = std::string(64, 'a');
    r.url = url;
    r.domain = classify_url(url);
    r.file_type = "pdf";
    r.query = "filetype:pdf \"1-1001-\"";
    return r;
}

}  // namespace

TEST(Formats, Names)
{
    EXPECT_EQ(parseReportFormat("md"), ReportFormat::Markdown);
    EXPECT_EQ(parseReportFormat("json"), ReportFormat::Json);
    EXPECT_FALSE(parseReportFormat("xml"));
    EXPECT_EQ(fileExtension(ReportFormat::Markdown), "md");
}

TEST(RedactionPolicy, OffNeedsAcknowledgement)
{
    EXPECT_THROW(Redaction::off(false), UnsafeOutputError);
    EXPECT_FALSE(Redaction::off(true).enabled());
    EXPECT_THROW(Redaction::on(""), std::invalid_argument);
}

TEST(RedactionPolicy, TokenFormat)
{
    const auto r = Redaction::on("key");
    const auto token = r.tokenFor("1100100000018");
    EXPECT_EQ(token, "ID:2c70e12b:8fdaa5c7.327df28b.10f9e5e5.dcdfa484.a8d4e2e0.5aa7e574.55ff04a2.0a70864e");
    EXPECT_EQ(r.scrub("id 1-1001-00000-01-8 end"), "id " + token + " end");
    // Checksum-invalid runs are left alone.
    EXPECT_EQ(r.scrub("1100100000017"), "1100100000017");
}

TEST(Render, RepeatTableMarkdownGolden)
{
    const std::vector<ReportTable> tables{{"repeat_exposure", "Repeat exposure across source URLs", repeatFixture()}};
    checkGolden("repeat_exposure.md", render_report(tables, ReportFormat::Markdown, Redaction::on("golden")));
}

TEST(Render, RepeatTableCsvGolden)
{
    const std::vector<ReportTable> tables{{"repeat_exposure", "Repeat exposure across source URLs", repeatFixture()}};
    checkGolden("repeat_exposure.csv", render_report(tables, ReportFormat::Csv, Redaction::on("golden")));
}

TEST(Render, CsvTakesOneTable)
{
    const ReportTable t{"a", "A", repeatFixture()};
    EXPECT_THROW(render_report({t, t}, ReportFormat::Csv, Redaction::on("s")), std::invalid_argument);
}

TEST(Render, Deterministic)
{
    const std::vector<ReportTable> tables{{"repeat_exposure", "Repeat", repeatFixture()}};
    for (auto f : {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown})
        EXPECT_EQ(render_report(tables, f, Redaction::on("s")), render_report(tables, f, Redaction::on("s")));
}

TEST(Json, RoundTrip)
{
    AggregateTable geo;
    geo.dimension = "province";
    geo.total_unique_ids = 48057;
    geo.rows.push_back({"91", "Satun", 3, 2, 1, 1, 48057, 324390, Percent{1481, 2}});
    geo.rows.push_back({"99", "", 0, 0, 0, 0, 1, std::nullopt, std::nullopt});
    ListingTable listing{{"a", "b"}, {{"x", "y"}, {"", "z"}}};
    const std::vector<ReportTable> tables{
        {"repeat_exposure", "Repeat", repeatFixture()}, {"geo", "Provinces", geo}, {"list", "Listing", listing}};
    const auto json = render_report(tables, ReportFormat::Json, Redaction::off(true));
    EXPECT_EQ(parse_report_json(json), tables);
    EXPECT_THROW(parse_report_json("{}"), std::exception);
}

TEST(RedactionCompleteness, EveryFormat)
{
    const auto& reg = testsupport::registry();
    std::vector<ExposureRecord> recs;
    for (int i = 0; i < 50; ++i) {
        auto seq = std::to_string(i * 7919);
        seq.insert(0, 7 - seq.size(), '0');
        recs.push_back(record(generate_valid_id("11001", seq, reg), "https://nfe.go.th/list-" + std::to_string(i) + ".pdf"));
    }
    // An ID in a URL and a query string must be scrubbed too.
    recs[0].url = "https://nfe.go.th/" + recs[1].id + ".pdf";
    recs[0].query = "\"" + recs[2].id + "\"";
    const ReportTable listing{"records", "Records", recordListing(recs)};
    const ReportTable cats{"category", "Category", aggregate(recs, Dimension::CategoryDigit)};
    const auto redaction = Redaction::on("salt");

    EXPECT_FALSE(acceptedRuns(render_report({listing}, ReportFormat::Csv, Redaction::off(true))).empty());
    for (auto f : {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown}) {
        const auto text = render_report({listing}, f, redaction);
        EXPECT_TRUE(acceptedRuns(text).empty()) << formatName(f);
    }
    EXPECT_TRUE(acceptedRuns(render_report({cats, listing}, ReportFormat::Json, redaction)).empty());

    testsupport::TempDir dir("emit");
    const auto paths = emit_report({{"records", {listing}}, {"summary", {cats, listing}}}, ReportFormat::Csv, redaction,
                                   dir.path());
    EXPECT_EQ(paths.size(), 3u);
    for (const auto& p : paths)
        EXPECT_TRUE(acceptedRuns(testsupport::readFile(p)).empty()) << p;
}

TEST(Emit, FileNamesPerFormat)
{
    testsupport::TempDir dir("names");
    const ReportTable a{"repeat_exposure", "Repeat", repeatFixture()};
    auto b = a;
    b.name = "other";
    const auto md = emit_report({{"repeat", {a, b}}}, ReportFormat::Markdown, Redaction::on("s"), dir.path());
    ASSERT_EQ(md.size(), 1u);
    EXPECT_EQ(md[0].filename(), "repeat.md");
    const auto csv = emit_report({{"repeat", {a, b}}, {"single", {a}}}, ReportFormat::Csv, Redaction::on("s"), dir.path());
    ASSERT_EQ(csv.size(), 3u);
    EXPECT_EQ(csv[0].filename(), "repeat_exposure.csv");
    EXPECT_EQ(csv[1].filename(), "other.csv");
    EXPECT_EQ(csv[2].filename(), "single.csv");
    EXPECT_THROW(emit_report({{"x", {a}}}, ReportFormat::Csv, Redaction::on("s"), "/proc/nonexistent/dir"),
                 std::runtime_error);
}
