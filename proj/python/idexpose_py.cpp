// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "idexpose/analytics.hpp"
#include "idexpose/corpus.hpp"
#include "idexpose/extraction.hpp"
#include "idexpose/harvester.hpp"
#include "idexpose/idcore.hpp"
#include "idexpose/pipeline.hpp"
#include "idexpose/querygen.hpp"
#include "idexpose/report.hpp"

namespace py = pybind11;
using namespace idexpose;

namespace {

py::dict validationDict(const ValidationOutcome& o)
{
    static const std::array<const char*, 3> kNames{"format", "checksum", "prefix"};
    py::dict stages;
    for (std::size_t i = 0; i < 3; ++i) {
        const bool ran = !o.failed_stage || static_cast<std::size_t>(*o.failed_stage) >= i;
        stages[kNames[i]] = ran ? py::cast(o.stage_results[i]) : py::none();
    }
    py::dict d;
    d["accepted"] = o.accepted();
    d["failed_stage"] = o.failed_stage ? py::cast(std::string(stageName(*o.failed_stage))) : py::none();
    d["stages"] = stages;
    return d;
}

py::dict summaryDict(const ScanSummary& s)
{
    py::dict d;
    d["queries"] = s.queries;
    d["pages_fetched"] = s.pages_fetched;
    d["query_failures"] = s.query_failures;
    d["unique_urls"] = s.unique_urls;
    d["downloads_ok"] = s.downloads_ok;
    d["downloads_failed"] = s.downloads_failed;
    d["type_mismatches"] = s.type_mismatches;
    d["documents"] = s.documents;
    d["documents_with_ids"] = s.documents_with_ids;
    d["extraction_failures"] = s.extraction_failures;
    d["exposures"] = s.exposures;
    d["unique_ids"] = s.unique_ids;
    d["new_exposures"] = s.new_exposures;
    d["text"] = formatSummary(s);
    return d;
}

ScanSummary scanFixture(const std::filesystem::path& plan, const std::filesystem::path& index,
                        const std::filesystem::path& store, const std::optional<std::filesystem::path>& extractors,
                        const GeoRegistry& registry, int searchDelayMs, int maxPages)
{
    const auto queryPlan = loadPlanFile(plan);
    const auto corpus = FixtureCorpus::load(index);
    const auto specs = extractors ? loadExtractorConfig(*extractors) : defaultExtractors();
    CrawlConfig config;
    config.search_delay = Millis(searchDelayMs);
    config.max_pages = maxPages;

    py::gil_scoped_release release;
    FixtureProvider provider(corpus);
    FixtureFetcher fetcher(corpus);
    VirtualClock clock;
    StoreLock lock(store);
    ResultStore db(store);
    return run_scan(queryPlan, provider, fetcher, db, registry, specs, config, clock);
}

std::string reportJson(const std::filesystem::path& store, const std::vector<std::string>& tables,
                       const GeoRegistry& registry, const std::optional<std::string>& salt, bool unredacted,
                       bool acceptRisk)
{
    const auto redaction = unredacted ? Redaction::off(acceptRisk)
                                      : Redaction::on(salt.value_or(""));
    if (!std::filesystem::exists(store))
        throw std::runtime_error("store not found: " + store.string());
    ResultStore db(store);
    std::vector<Diagnostic> diagnostics;
    const auto records = buildRecords(db.exposures(), PublicSuffixList::builtin(), nullptr, &diagnostics);
    std::vector<ReportTable> out;
    for (const auto& name : tables) {
        for (auto& t : build_report_group(name, records, diagnostics, registry).tables)
            out.push_back(std::move(t));
    }
    return render_report(out, ReportFormat::Json, redaction);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Thai national ID validation, query rendering, fixture scans and redacted reports";

    py::register_exception<RegistryError>(m, "RegistryError", PyExc_ValueError);
    py::register_exception<QueryError>(m, "QueryError", PyExc_ValueError);
    py::register_exception<ClassificationError>(m, "ClassificationError", PyExc_ValueError);
    py::register_exception<UnsafeOutputError>(m, "UnsafeOutputError", PyExc_PermissionError);

    py::class_<GeoRegistry>(m, "Registry")
        .def_static("load", &GeoRegistry::loadFile, py::arg("path"))
        .def_static("parse", [](const std::string& text) { return GeoRegistry::load(text); }, py::arg("text"))
        .def("province", [](const GeoRegistry& r, const std::string& code) -> std::optional<std::string> {
            if (auto p = r.lookupProvince(code))
                return p->name;
            return std::nullopt;
        })
        .def("district", [](const GeoRegistry& r, const std::string& code) -> std::optional<std::string> {
            if (auto d = r.lookupDistrict(code))
                return d->name;
            return std::nullopt;
        })
        .def("population", &GeoRegistry::populationOf, py::arg("code"))
        .def_property_readonly("province_count", [](const GeoRegistry& r) { return r.provinces().size(); })
        .def_property_readonly("district_count", [](const GeoRegistry& r) { return r.districts().size(); })
        .def("serialize", [](const GeoRegistry& r) { return r.serialize(); });

    m.def("normalize_numerals", &normalize_numerals, py::arg("text"));
    m.def("compute_checksum", &compute_checksum, py::arg("prefix12"));
    m.def(
        "find_candidates",
        [](const std::string& text) {
            py::list out;
            for (const auto& c : find_candidates(text)) {
                py::dict d;
                d["raw"] = c.raw_text;
                d["normalized"] = c.normalized;
                d["begin"] = c.source_span.begin;
                d["end"] = c.source_span.end;
                out.append(d);
            }
            return out;
        },
        py::arg("text"), "Candidates with byte offsets into the UTF-8 text");
    m.def(
        "validate", [](const std::string& n, const GeoRegistry& r) { return validationDict(validate(n, r)); },
        py::arg("number"), py::arg("registry"));
    m.def(
        "decode",
        [](const std::string& n, const GeoRegistry& r) {
            const auto id = decode(n, r);
            py::dict d;
            d["digits"] = id.digits;
            d["category"] = id.category;
            d["category_description"] = std::string(categoryDescription(id.category));
            d["province_code"] = id.province_code;
            d["province"] = id.province_name;
            d["district_code"] = id.district_code;
            d["district"] = id.district_name;
            d["sequence"] = id.sequence;
            d["check_digit"] = id.check_digit;
            return d;
        },
        py::arg("number"), py::arg("registry"));
    m.def("generate_valid_id", &generate_valid_id, py::arg("prefix5"), py::arg("sequence7"), py::arg("registry"));
    m.def(
        "pseudonymize",
        [](const std::string& id, const std::string& salt) {
            const auto t = pseudonymize(id, salt);
            return py::make_tuple(t.token, t.salt_id);
        },
        py::arg("number"), py::arg("salt"));

    m.def(
        "render_query", [](const std::string& text) { return render(parseQuery(text)); }, py::arg("text"),
        "Parse query text and return its canonical rendering");
    m.def("is_well_formed_query", &isWellFormedQuery, py::arg("text"));
    m.def("prefix_dorks", &prefix_dorks, py::arg("registry"), py::arg("categories"));

    m.def(
        "classify_url",
        [](const std::string& url) {
            const auto info = classify_url(url);
            py::dict d;
            d["fqdn"] = info.fqdn;
            d["registered_domain"] = info.registered_domain;
            d["tld"] = info.tldKey();
            return d;
        },
        py::arg("url"));
    m.def(
        "rounded_percent",
        [](std::uint64_t n, std::uint64_t d, int decimals) { return roundedPercent(n, d, decimals).str(); },
        py::arg("numerator"), py::arg("denominator"), py::arg("decimals"));

    m.def(
        "generate_corpus",
        [](const std::filesystem::path& out, const GeoRegistry& registry, std::uint64_t seed, std::size_t planted,
           std::size_t decoys, std::size_t documents, std::vector<std::string> formats, std::string stubCommand) {
            CorpusSpec spec;
            spec.seed = seed;
            spec.planted = planted;
            spec.decoys = decoys;
            spec.documents = documents;
            spec.formats = std::move(formats);
            spec.stub_command = std::move(stubCommand);
            const auto c = generate_corpus(spec, registry, out);
            py::dict d;
            d["index"] = c.index_path;
            d["plan"] = c.plan_path;
            d["extractors"] = c.extractors_path.empty() ? py::none() : py::cast(c.extractors_path);
            d["planted"] = c.planted;
            d["documents"] = c.document_count;
            return d;
        },
        py::arg("out"), py::arg("registry"), py::arg("seed") = 1, py::arg("planted") = 40, py::arg("decoys") = 10,
        py::arg("documents") = 12, py::arg("formats") = std::vector<std::string>{"txt", "csv", "html"},
        py::arg("stub_command") = "");

    m.def(
        "scan_fixture",
        [](const std::filesystem::path& plan, const std::filesystem::path& index, const std::filesystem::path& store,
           const GeoRegistry& registry, const std::optional<std::filesystem::path>& extractors, int searchDelayMs,
           int maxPages) {
            return summaryDict(scanFixture(plan, index, store, extractors, registry, searchDelayMs, maxPages));
        },
        py::arg("plan"), py::arg("index"), py::arg("store"), py::arg("registry"), py::arg("extractors") = py::none(),
        py::arg("search_delay_ms") = 2000, py::arg("max_pages") = 10,
        "Run a plan against a fixture corpus on a virtual clock");

    m.def("report_table_names", &reportTableNames);
    m.def("report_json", &reportJson, py::arg("store"), py::arg("tables"), py::arg("registry"),
          py::arg("salt") = py::none(), py::arg("unredacted") = false, py::arg("i_accept_risk") = false,
          "Aggregate a store and render the tables as the JSON report document");
}
