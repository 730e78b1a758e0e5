// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

// idexpose: command-line front end.
//
// Exit status: 0 success, 1 negative result (rejected ID, no results),
// 2 operator or I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "idexpose/analytics.hpp"
#include "idexpose/corpus.hpp"
#include "idexpose/extraction.hpp"
#include "idexpose/georegistry.hpp"
#include "idexpose/harvester.hpp"
#include "idexpose/idcore.hpp"
#include "idexpose/pipeline.hpp"
#include "idexpose/querygen.hpp"
#include "idexpose/report.hpp"
#include "idexpose/result_store.hpp"

#ifndef IDEXPOSE_DATA_DIR
#define IDEXPOSE_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace idexpose;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kOperatorError = 2;

// Raised for bad invocations that CLI11 cannot catch on its own.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> splitList(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto b = item.find_first_not_of(' ');
        auto e = item.find_last_not_of(' ');
        if (b != std::string::npos)
            out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string readFile(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Globals {
    std::string registry = std::string(IDEXPOSE_DATA_DIR) + "/registry.csv";
};

GeoRegistry loadRegistry(const Globals& g)
{
    return GeoRegistry::loadFile(g.registry);
}

// One CLI11 option per crawl field, so flag, environment and config file share it.
struct CrawlOptions {
    long long search_delay_ms = 2000;
    long long download_timeout_ms = 30000;
    int download_max_retry = 2;
    int max_pages = 10;
    std::string accepted_types = "pdf,xls,xlsx,doc,docx,txt,csv,html";
    std::uint64_t max_bytes = 64ull * 1024 * 1024;
    int download_workers = 4;

    void attach(CLI::App* app)
    {
        app->add_option("--search-delay-ms", search_delay_ms, "Pause between search requests and per-host downloads")
            ->envname("IDEXPOSE_SEARCH_DELAY_MS")
            ->capture_default_str();
        app->add_option("--download-timeout-ms", download_timeout_ms, "Per-attempt download timeout")
            ->envname("IDEXPOSE_DOWNLOAD_TIMEOUT_MS")
            ->capture_default_str();
        app->add_option("--download-max-retry", download_max_retry, "Retries after a failed download attempt")
            ->envname("IDEXPOSE_DOWNLOAD_MAX_RETRY")
            ->capture_default_str();
        app->add_option("--max-pages", max_pages, "Result pages fetched per query and engine")
            ->envname("IDEXPOSE_MAX_PAGES")
            ->capture_default_str();
        app->add_option("--accepted-types", accepted_types, "Comma-separated file types kept after download")
            ->envname("IDEXPOSE_ACCEPTED_TYPES")
            ->capture_default_str();
        app->add_option("--max-bytes", max_bytes, "Largest document accepted, in bytes")
            ->envname("IDEXPOSE_MAX_BYTES")
            ->capture_default_str();
        app->add_option("--download-workers", download_workers, "Concurrent downloads")
            ->envname("IDEXPOSE_DOWNLOAD_WORKERS")
            ->capture_default_str();
    }

    CrawlConfig resolve() const
    {
        CrawlConfig c;
        c.search_delay = Millis(search_delay_ms);
        c.download_timeout = Millis(download_timeout_ms);
        c.download_max_retry = download_max_retry;
        c.max_pages = max_pages;
        auto types = splitList(accepted_types);
        c.accepted_types = std::set<std::string>(types.begin(), types.end());
        c.max_bytes = max_bytes;
        c.download_workers = download_workers;
        c.check();
        return c;
    }
};

void printCrawlConfig(std::ostream& out, const CrawlConfig& c)
{
    std::string types;
    for (const auto& t : c.accepted_types)
        types += (types.empty() ? "" : ",") + t;
    out << "search_delay_ms=" << c.search_delay.count() << '\n'
        << "download_timeout_ms=" << c.download_timeout.count() << '\n'
        << "download_max_retry=" << c.download_max_retry << '\n'
        << "max_pages=" << c.max_pages << '\n'
        << "accepted_types=" << types << '\n'
        << "max_bytes=" << c.max_bytes << '\n'
        << "download_workers=" << c.download_workers << '\n';
}

// id ------------------------------------------------------------------------

int cmdIdValidate(const Globals& g, const std::string& number)
{
    const auto registry = loadRegistry(g);
    const auto outcome = validate(number, registry);
    for (auto stage : {ValidationStage::Format, ValidationStage::Checksum, ValidationStage::Prefix}) {
        const auto i = static_cast<std::size_t>(stage);
        const char* state = outcome.stage_results[i] ? "pass"
                          : (outcome.failed_stage && *outcome.failed_stage == stage) ? "fail"
                                                                                     : "not run";
        std::cout << stageName(stage) << ": " << state << '\n';
    }
    if (!outcome.accepted()) {
        std::cout << "rejected at " << stageName(*outcome.failed_stage) << '\n';
        return kNegative;
    }
    const auto id = decode(number, registry);
    std::cout << "accepted\n"
              << "category: " << id.category << " (" << categoryDescription(id.category) << ")\n"
              << "location: " << id.district_name << " / " << id.province_name << '\n'
              << "district: " << id.district_code << '\n'
              << "province: " << id.province_code << '\n'
              << "sequence: " << id.sequence << '\n'
              << "check digit: " << id.check_digit << '\n';
    return kOk;
}

int cmdIdDecode(const Globals& g, const std::string& number)
{
    const auto registry = loadRegistry(g);
    const auto outcome = validate(number, registry);
    if (!outcome.accepted()) {
        std::cerr << "rejected at " << stageName(*outcome.failed_stage) << '\n';
        return kNegative;
    }
    const auto id = decode(number, registry);
    nlohmann::ordered_json j{{"category", id.category},           {"province_code", id.province_code},
                             {"province", id.province_name},      {"district_code", id.district_code},
                             {"district", id.district_name},      {"sequence", id.sequence},
                             {"check_digit", id.check_digit}};
    std::cout << j.dump() << '\n';
    return kOk;
}

int cmdIdGenerate(const Globals& g, const std::string& prefix, const std::string& sequence)
{
    const auto registry = loadRegistry(g);
    std::cout << generate_valid_id(prefix, sequence, registry) << '\n';
    return kOk;
}

int cmdIdPseudonymize(const std::string& number, const std::string& salt)
{
    if (!isIdFormat(number))
        throw UsageError("expected 13 ASCII digits");
    const auto token = pseudonymize(number, salt);
    std::cout << token.token << ' ' << token.salt_id << '\n';
    return kOk;
}

// query ---------------------------------------------------------------------

int cmdQueryRender(const std::string& text)
{
    std::cout << render(parseQuery(text)) << '\n';
    return kOk;
}

int cmdQueryDorks(const Globals& g, const std::string& categories)
{
    std::set<int> cats;
    for (const auto& c : splitList(categories)) {
        try {
            cats.insert(std::stoi(c));
        } catch (const std::exception&) {
            throw UsageError("category must be a digit: " + c);
        }
    }
    const auto registry = loadRegistry(g);
    for (const auto& q : prefix_dorks(registry, cats))
        std::cout << q << '\n';
    return kOk;
}

int cmdQueryPlan(const std::string& templatePath, std::size_t templateIndex, const std::string& bindingsPath,
                 const std::string& engines, int maxPages, const std::string& tags, const std::string& out)
{
    std::ifstream tin(templatePath);
    if (!tin)
        throw std::runtime_error("cannot open " + templatePath);
    const auto templates = loadTemplates(tin);
    if (templateIndex >= templates.size())
        throw UsageError("template index " + std::to_string(templateIndex) + " out of range; file has "
                         + std::to_string(templates.size()));
    std::ifstream bin(bindingsPath);
    if (!bin)
        throw std::runtime_error("cannot open " + bindingsPath);
    const auto bindings = loadBindings(bin);

    std::set<Engine> engineSet;
    for (const auto& e : splitList(engines))
        engineSet.insert(parseEngine(e));
    const auto plan = build_plan(templates[templateIndex], bindings, engineSet, maxPages, splitList(tags));
    const auto json = planToJson(plan);
    if (out.empty()) {
        std::cout << json;
    } else {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!(f << json))
            throw std::runtime_error("cannot write " + out);
        std::cerr << "wrote " << plan.queries.size() << " queries to " << out << '\n';
    }
    return kOk;
}

// scan ----------------------------------------------------------------------

struct ScanArgs {
    std::string plan;
    std::string fixture;
    std::string store = "idexpose.db";
    std::string extractors;
    std::string endpoint;
    bool allowLive = false;
    bool realTime = false;
    bool showConfig = false;
    CrawlOptions crawl;
};

int cmdScanRun(const Globals& g, const ScanArgs& a)
{
    const auto config = a.crawl.resolve();
    if (a.showConfig) {
        printCrawlConfig(std::cout, config);
        return kOk;
    }

    const auto registry = loadRegistry(g);
    QueryPlan plan;
    try {
        plan = loadPlanFile(a.plan);
    } catch (const QueryError& e) {
        throw UsageError(e.what());
    }
    const auto extractors = a.extractors.empty() ? defaultExtractors() : loadExtractorConfig(a.extractors);

    std::unique_ptr<SearchProvider> provider;
    std::unique_ptr<Fetcher> fetcher;
    if (!a.endpoint.empty()) {
        if (!a.fixture.empty())
            throw UsageError("--fixture and --endpoint are mutually exclusive");
        provider = std::make_unique<HttpSearchProvider>(a.endpoint, a.allowLive, config.download_timeout);
        fetcher = std::make_unique<HttpFetcher>();
    } else {
        if (a.fixture.empty())
            throw UsageError("--fixture is required unless a live endpoint is configured");
        auto corpus = FixtureCorpus::load(a.fixture);
        provider = std::make_unique<FixtureProvider>(corpus);
        fetcher = std::make_unique<FixtureFetcher>(std::move(corpus));
    }

    // Fixture runs default to simulated time: pauses are accounted, not slept.
    SystemClock systemClock;
    VirtualClock virtualClock;
    const bool simulated = a.endpoint.empty() && !a.realTime;
    Clock& clock = simulated ? static_cast<Clock&>(virtualClock) : systemClock;

    StoreLock lock(a.store);
    ResultStore store(a.store);
    const auto summary = run_scan(plan, *provider, *fetcher, store, registry, extractors, config, clock);

    std::cout << formatSummary(summary);
    if (simulated) {
        Millis waited{0};
        for (auto s : virtualClock.sleeps())
            waited += s;
        std::cout << "simulated politeness wait: " << waited.count() << " ms\n";
    }
    for (const auto& f : store.queryFailures())
        std::cerr << "query failed: [" << engineName(f.engine) << " p" << f.page_number << "] " << f.query << ": "
                  << f.message << '\n';

    if (summary.pages_fetched == 0 || summary.unique_urls == 0)
        return kNegative;
    return kOk;
}

// report --------------------------------------------------------------------

struct ReportArgs {
    std::string store = "idexpose.db";
    std::string tables = "filetype,tld,geo,repeat";
    std::string format = "markdown";
    std::string out = "report";
    std::string salt;
    std::string saltFile;
    std::string tags;
    std::string psl;
    std::string order = "count";
    std::size_t top = 0;
    bool unredacted = false;
    bool acceptRisk = false;
};

int cmdReport(const Globals& g, const ReportArgs& a)
{
    std::vector<std::string> requested = splitList(a.tables);
    if (requested.empty())
        throw UsageError("--tables is empty");
    for (const auto& t : requested) {
        if (std::find(reportTableNames().begin(), reportTableNames().end(), t) == reportTableNames().end()) {
            std::string valid;
            for (const auto& n : reportTableNames())
                valid += (valid.empty() ? "" : ", ") + n;
            throw UsageError("unknown table '" + t + "'; valid names: " + valid);
        }
    }
    const auto format = parseReportFormat(a.format);
    if (!format)
        throw UsageError("unknown format '" + a.format + "'; valid formats: csv, json, markdown");
    if (a.order != "count" && a.order != "percent")
        throw UsageError("--order must be count or percent");

    std::optional<Redaction> redaction;
    if (a.unredacted) {
        try {
            redaction = Redaction::off(a.acceptRisk);
        } catch (const UnsafeOutputError& e) {
            throw UsageError(std::string(e.what()) + " (--unredacted needs --i-accept-risk)");
        }
    } else {
        std::string salt = a.salt;
        if (salt.empty() && !a.saltFile.empty()) {
            salt = readFile(a.saltFile);
            while (!salt.empty() && (salt.back() == '\n' || salt.back() == '\r'))
                salt.pop_back();
        }
        if (salt.empty())
            throw UsageError("redacted reports need a salt (--salt, --salt-file or IDEXPOSE_SALT)");
        redaction = Redaction::on(salt);
    }

    if (!fs::exists(a.store))
        throw std::runtime_error("store not found: " + a.store);
    const auto registry = loadRegistry(g);
    const auto psl = a.psl.empty() ? PublicSuffixList::builtin() : PublicSuffixList::loadFile(a.psl);
    std::optional<TagMap> tags;
    if (!a.tags.empty())
        tags = TagMap::loadFile(a.tags);

    StoreLock lock(a.store);
    ResultStore store(a.store);
    std::vector<Diagnostic> diagnostics;
    const auto records = buildRecords(store.exposures(), psl, tags ? &*tags : nullptr, &diagnostics);

    ReportOptions options;
    options.geo_order = a.order == "percent" ? GeoOrder::ByPercent : GeoOrder::ByCount;
    options.top = a.top;
    std::vector<ReportGroup> groups;
    for (const auto& t : requested)
        groups.push_back(build_report_group(t, records, diagnostics, registry, options));

    for (const auto& path : emit_report(groups, *format, *redaction, a.out))
        std::cout << path.string() << '\n';
    if (!diagnostics.empty())
        std::cerr << diagnostics.size() << " URL(s) could not be classified; see the diagnostics table\n";
    return records.empty() ? kNegative : kOk;
}

// corpus --------------------------------------------------------------------

int cmdCorpusGenerate(const Globals& g, const CorpusSpec& spec, const std::string& out)
{
    const auto registry = loadRegistry(g);
    const auto corpus = generate_corpus(spec, registry, out);
    std::cout << "documents: " << corpus.document_count << "\nplanted IDs: " << corpus.planted.size()
              << "\ndecoys: " << corpus.decoys.size() << "\nindex: " << corpus.index_path.string()
              << "\nplan: " << corpus.plan_path.string() << '\n';
    return kOk;
}

// CLI11 applies the config file before the environment, which would let a
// config entry shadow a set environment variable. Entries whose option has a
// set environment variable are dropped so the order is flag, env, config.
class EnvFirstConfig : public CLI::ConfigTOML {
public:
    explicit EnvFirstConfig(const CLI::App& app) { collect(app, ""); }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        auto items = CLI::ConfigTOML::from_config(input);
        std::erase_if(items, [&](const CLI::ConfigItem& item) {
            std::string key;
            for (const auto& p : item.parents)
                key += p + ".";
            auto it = mEnvByKey.find(key + item.name);
            if (it == mEnvByKey.end())
                return false;
            const char* value = std::getenv(it->second.c_str());
            return value != nullptr && *value != '\0';
        });
        return items;
    }

private:
    void collect(const CLI::App& app, const std::string& prefix)
    {
        for (const auto* opt : app.get_options()) {
            if (opt->get_envname().empty())
                continue;
            for (const auto& name : opt->get_lnames())
                mEnvByKey[prefix + name] = opt->get_envname();
        }
        for (const auto* sub : app.get_subcommands({}))
            collect(*sub, prefix + sub->get_name() + ".");
    }

    std::map<std::string, std::string> mEnvByKey;
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Find, validate and report exposed Thai national ID numbers in fixture or live search results"};
    app.set_config("--config", "", "TOML file supplying any option; command-line flags and environment win");
    app.require_subcommand(1);

    Globals g;
    app.add_option("--registry", g.registry, "Geography registry file")->envname("IDEXPOSE_REGISTRY")->capture_default_str();

    std::function<int()> action;

    // id
    auto* id = app.add_subcommand("id", "Validate, decode, generate or pseudonymize single IDs");
    id->require_subcommand(1);
    std::string number, prefix, sequence = "0000001", salt;
    auto* idValidate = id->add_subcommand("validate", "Run format, checksum and prefix checks");
    idValidate->add_option("number", number, "13-digit number")->required();
    idValidate->callback([&] { action = [&] { return cmdIdValidate(g, number); }; });
    auto* idDecode = id->add_subcommand("decode", "Print the fields of an accepted ID as JSON");
    idDecode->add_option("number", number, "13-digit number")->required();
    idDecode->callback([&] { action = [&] { return cmdIdDecode(g, number); }; });
    auto* idGenerate = id->add_subcommand("generate", "Make a synthetic valid ID for tests");
    idGenerate->add_option("--prefix", prefix, "Category digit and district code, 5 digits")->required();
    idGenerate->add_option("--sequence", sequence, "7-digit serial")->capture_default_str();
    idGenerate->callback([&] { action = [&] { return cmdIdGenerate(g, prefix, sequence); }; });
    auto* idPseudo = id->add_subcommand("pseudonymize", "Print the keyed token and salt id");
    idPseudo->add_option("number", number, "13-digit number")->required();
    idPseudo->add_option("--salt", salt, "Secret salt")->envname("IDEXPOSE_SALT")->required();
    idPseudo->callback([&] { action = [&] { return cmdIdPseudonymize(number, salt); }; });

    // query
    auto* query = app.add_subcommand("query", "Render queries and build query plans");
    query->require_subcommand(1);
    std::string queryText, categories = "1,2,3,4,5,6,7,8";
    auto* qRender = query->add_subcommand("render", "Parse a query and print its canonical rendering");
    qRender->add_option("text", queryText, "Query text")->required();
    qRender->callback([&] { action = [&] { return cmdQueryRender(queryText); }; });
    auto* qDorks = query->add_subcommand("dorks", "Print geographic prefix queries for every registry district");
    qDorks->add_option("--categories", categories, "Comma-separated category digits")->capture_default_str();
    qDorks->callback([&] { action = [&] { return cmdQueryDorks(g, categories); }; });
    std::string templatePath, bindingsPath, engines = "google", tagList, planOut;
    std::size_t templateIndex = 0;
    int planPages = 10;
    auto* qPlan = query->add_subcommand("plan", "Expand a template over a bindings table into a plan");
    qPlan->add_option("--template", templatePath, "Template file, one per line")->required();
    qPlan->add_option("--index", templateIndex, "Template line to use (0-based, comments skipped)");
    qPlan->add_option("--bindings", bindingsPath, "Tab-separated bindings with a header row")->required();
    qPlan->add_option("--engines", engines, "Comma-separated engines")->capture_default_str();
    qPlan->add_option("--max-pages", planPages, "Pages per query and engine")->capture_default_str();
    qPlan->add_option("--tags", tagList, "Comma-separated plan tags");
    qPlan->add_option("--out", planOut, "Write the plan here instead of stdout");
    qPlan->callback([&] {
        action = [&] { return cmdQueryPlan(templatePath, templateIndex, bindingsPath, engines, planPages, tagList, planOut); };
    });

    // scan
    auto* scan = app.add_subcommand("scan", "Run a query plan end to end");
    scan->require_subcommand(1);
    ScanArgs scanArgs;
    auto* scanRun = scan->add_subcommand("run", "Search, download, extract, validate and store");
    scanRun->add_option("--plan", scanArgs.plan, "Plan file (JSON, or one query per line)")->required();
    scanRun->add_option("--fixture", scanArgs.fixture, "Fixture corpus index.json");
    scanRun->add_option("--store", scanArgs.store, "Result database")->envname("IDEXPOSE_STORE")->capture_default_str();
    scanRun->add_option("--extractors", scanArgs.extractors, "Extractor configuration (JSON)")
        ->envname("IDEXPOSE_EXTRACTORS");
    scanRun->add_option("--endpoint", scanArgs.endpoint, "Live search endpoint URL")->envname("IDEXPOSE_ENDPOINT");
    scanRun->add_flag("--unsafe-live", scanArgs.allowLive, "Permit the live provider");
    scanRun->add_flag("--real-time", scanArgs.realTime, "Sleep for real between fixture requests");
    scanRun->add_flag("--show-config", scanArgs.showConfig, "Print the resolved crawl settings");
    scanArgs.crawl.attach(scanRun);
    scanRun->callback([&] { action = [&] { return cmdScanRun(g, scanArgs); }; });

    // report
    ReportArgs reportArgs;
    auto* report = app.add_subcommand("report", "Aggregate a store into report files");
    report->add_option("--store", reportArgs.store, "Result database")->envname("IDEXPOSE_STORE")->capture_default_str();
    report->add_option("--tables", reportArgs.tables, "Comma-separated: filetype, tld, geo, repeat, domain, owner, "
                                                      "query, category, page, records, diagnostics")
        ->capture_default_str();
    report->add_option("--format", reportArgs.format, "csv, json or markdown")->capture_default_str();
    report->add_option("--out", reportArgs.out, "Output directory")->capture_default_str();
    report->add_option("--salt", reportArgs.salt, "Pseudonymization salt")->envname("IDEXPOSE_SALT");
    report->add_option("--salt-file", reportArgs.saltFile, "File holding the salt");
    report->add_option("--tags", reportArgs.tags, "domain,tag mapping file");
    report->add_option("--psl", reportArgs.psl, "Public suffix list file");
    report->add_option("--order", reportArgs.order, "Geography sort: count or percent")->capture_default_str();
    report->add_option("--top", reportArgs.top, "Keep only the first N rows of each aggregate table");
    report->add_flag("--unredacted", reportArgs.unredacted, "Write raw IDs (needs --i-accept-risk)");
    report->add_flag("--i-accept-risk", reportArgs.acceptRisk, "Acknowledge the risk of unredacted output");
    report->callback([&] { action = [&] { return cmdReport(g, reportArgs); }; });

    // corpus
    auto* corpus = app.add_subcommand("corpus", "Synthetic fixture corpora");
    corpus->require_subcommand(1);
    CorpusSpec spec;
    std::string corpusOut, formats = "txt,csv,html";
    auto* cGen = corpus->add_subcommand("generate", "Write a corpus with known planted IDs and decoys");
    cGen->add_option("--out", corpusOut, "Output directory")->required();
    cGen->add_option("--seed", spec.seed)->capture_default_str();
    cGen->add_option("--planted", spec.planted)->capture_default_str();
    cGen->add_option("--decoys", spec.decoys)->capture_default_str();
    cGen->add_option("--documents", spec.documents)->capture_default_str();
    cGen->add_option("--queries", spec.queries)->capture_default_str();
    cGen->add_option("--formats", formats, "Comma-separated: txt, csv, html, pdf")->capture_default_str();
    cGen->add_option("--repeat-every", spec.repeat_every, "Also place every n-th ID in a second document");
    cGen->add_flag("--legacy-document", spec.legacy_encoding_document, "Add a TIS-620 encoded document");
    cGen->add_option("--stub-command", spec.stub_command, "Stub extractor command for pdf documents");
    cGen->callback([&] {
        spec.formats = splitList(formats);
        action = [&] { return cmdCorpusGenerate(g, spec, corpusOut); };
    });

    app.config_formatter(std::make_shared<EnvFirstConfig>(app));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kOperatorError;
    }

    try {
        return action ? action() : kOperatorError;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
    } catch (const RegistryError& e) {
        std::cerr << "registry error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kOperatorError;
}
