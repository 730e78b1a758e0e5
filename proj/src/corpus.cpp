// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "idexpose/digest.hpp"
#include "idexpose/idcore.hpp"
#include "idexpose/url.hpp"

namespace idexpose {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kStubHeader = "STUBDOC";

const std::vector<std::string>& hosts()
{
    static const std::vector<std::string> kHosts{
        "www.nfe.go.th",       "cdd.go.th",      "pokkrongnakhon.com", "chpao.org",
        "rta.mi.th",           "edudev.in.th",   "www.baac.or.th",     "thai.ac",
        "122.154.253.83",      "reg.example.ac.th", "files.example.co.th", "www.fisheries.go.th",
    };
    return kHosts;
}

const std::vector<std::string>& queryPool()
{
    static const std::vector<std::string> kQueries{
        R"(filetype:xls "National ID number" "name")",
        R"(site:ac.th filetype:xlsx OR filetype:xls "number" "citizen" "Mr.")",
        R"(filetype:pdf "1-3501-" "number" "citizen")",
        R"("certificate of tax withholding" filetype:pdf site:go.th ("Miss" AND "Mr."))",
        R"(filetype:pdf ("ID card number" OR "National ID number" OR "number") "list" "1-1001-")",
        R"(filetype:xlsx "เลขประจำตัวประชาชน" "นาย")",
        R"(filetype:pdf "รายชื่อ" "เลขบัตรประชาชน")",
        R"(site:go.th filetype:xls "บัญชีรายชื่อ")",
    };
    return kQueries;
}

const std::vector<std::string>& names()
{
    static const std::vector<std::string> kNames{
        "นาย สมชาย ใจดี",     "นาง สมศรี รักไทย",   "นางสาว มาลี ศรีสุข", "นาย ประยุทธ มั่นคง",
        "นาง วิไล แก้วมณี",   "นาย อนันต์ ทองคำ",   "นางสาว กาญจนา พรหมมา", "นาย วีระ สุขสวัสดิ์",
    };
    return kNames;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : mEngine(seed) {}
    // Modulo draw: slightly biased, but identical on every standard library.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(mEngine() % n); }
    std::string digits(std::size_t count)
    {
        std::string out;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(static_cast<char>('0' + below(10)));
        return out;
    }
    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 mEngine;
};

std::string thaiDigits(std::string_view ascii)
{
    std::string out;
    for (char c : ascii) {
        if (c >= '0' && c <= '9') {
            out.push_back(static_cast<char>(0xE0));
            out.push_back(static_cast<char>(0xB9));
            out.push_back(static_cast<char>(0x90 + (c - '0')));
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string grouped(std::string_view id, char sep1, char sep2)
{
    std::string out;
    out += id.substr(0, 1);
    out.push_back(sep1);
    out += id.substr(1, 4);
    out.push_back(sep2);
    out += id.substr(5, 5);
    out.push_back(sep1);
    out += id.substr(10, 2);
    out.push_back(sep2);
    out += id.substr(12, 1);
    return out;
}

enum class Form { Contiguous, Hyphen, Space, Thai, ThaiHyphen, Mixed };

std::string render(std::string_view id, Form form)
{
    switch (form) {
    case Form::Contiguous:
        return std::string(id);
    case Form::Hyphen:
        return grouped(id, '-', '-');
    case Form::Space:
        return grouped(id, ' ', ' ');
    case Form::Thai:
        return thaiDigits(id);
    case Form::ThaiHyphen:
        return thaiDigits(grouped(id, '-', '-'));
    case Form::Mixed:
        return grouped(id, ' ', '-');
    }
    return std::string(id);
}

std::string withCheckDigit(const std::string& prefix12)
{
    return prefix12 + static_cast<char>('0' + compute_checksum(prefix12));
}

struct Item {
    std::string text;
    std::string id;  // planted ID, empty for decoys
};

struct Document {
    std::string format;  // txt, csv, html, pdf or txt-legacy
    std::vector<Item> items;
    std::string url;
    std::string content_disposition;
    std::filesystem::path relPath;
};

std::string fileExt(const std::string& format)
{
    return format == "txt-legacy" ? "txt" : format;
}

std::string renderBody(const Document& doc, std::size_t docIndex)
{
    std::ostringstream out;
    const auto& n = names();
    auto rowName = [&](std::size_t row) { return n[(row + docIndex) % n.size()]; };

    if (doc.format == "csv") {
        out << "ลำดับ,ชื่อ-สกุล,เลขประจำตัวประชาชน,หมายเหตุ\n";
        for (std::size_t r = 0; r < doc.items.size(); ++r)
            out << r + 1 << ',' << rowName(r) << ',' << doc.items[r].text << ',' << (r % 3 == 0 ? "โทร 081-234-5678" : "")
                << '\n';
        return out.str();
    }
    if (doc.format == "html") {
        out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>รายชื่อ</title>"
            << "<style>td { padding: 2px; }</style></head>\n<body>\n<h1>บัญชีรายชื่อผู้มีสิทธิ์</h1>\n<table>\n"
            << "<tr><th>ลำดับ</th><th>ชื่อ</th><th>เลขประจำตัวประชาชน</th></tr>\n";
        for (std::size_t r = 0; r < doc.items.size(); ++r)
            out << "<tr><td>" << r + 1 << "</td><td>" << rowName(r) << "</td><td>" << doc.items[r].text
                << "</td></tr>\n";
        out << "</table>\n<!-- generated " << docIndex << " -->\n</body></html>\n";
        return out.str();
    }
    out << "บัญชีรายชื่อ ชุดที่ " << docIndex + 1 << "\n\n";
    for (std::size_t r = 0; r < doc.items.size(); ++r) {
        out << r + 1 << ". " << rowName(r) << " เลขประจำตัวประชาชน " << doc.items[r].text;
        if (r % 4 == 1)
            out << " โทร 02-123-4567";
        out << '\n';
    }
    return out.str();
}

void writeFile(const std::filesystem::path& path, std::string_view bytes)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string encodeStubDocument(std::string_view text)
{
    std::string out = std::string(kStubHeader) + "\n";
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        const auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (nl == std::string_view::npos && line.empty())
            break;
        out += toHex(line);
        out.push_back('\n');
        if (nl == std::string_view::npos)
            break;
        start = nl + 1;
    }
    return out;
}

std::string decodeStubDocument(std::string_view bytes)
{
    if (bytes.substr(0, kStubHeader.size()) != kStubHeader
        || bytes.size() <= kStubHeader.size() || bytes[kStubHeader.size()] != '\n')
        throw std::invalid_argument("not a stub document");
    auto hexValue = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        return -1;
    };
    std::string out;
    std::string_view rest = bytes.substr(kStubHeader.size() + 1);
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        const auto line = rest.substr(0, nl);
        if (line.size() % 2)
            throw std::invalid_argument("odd-length hex line in stub document");
        for (std::size_t i = 0; i < line.size(); i += 2) {
            const int hi = hexValue(line[i]);
            const int lo = hexValue(line[i + 1]);
            if (hi < 0 || lo < 0)
                throw std::invalid_argument("bad hex in stub document");
            out.push_back(static_cast<char>(hi * 16 + lo));
        }
        out.push_back('\n');
        if (nl == std::string_view::npos)
            break;
        rest.remove_prefix(nl + 1);
    }
    return out;
}

std::string encodeTis620(std::string_view utf8)
{
    std::string out;
    for (std::size_t i = 0; i < utf8.size();) {
        const auto c = static_cast<unsigned char>(utf8[i]);
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        if ((c & 0xF0) != 0xE0 || i + 2 >= utf8.size())
            throw std::invalid_argument("character outside ASCII and Thai");
        const unsigned cp = ((c & 0x0Fu) << 12) | ((static_cast<unsigned char>(utf8[i + 1]) & 0x3Fu) << 6)
                          | (static_cast<unsigned char>(utf8[i + 2]) & 0x3Fu);
        if (cp < 0x0E01 || cp > 0x0E5B)
            throw std::invalid_argument("character outside ASCII and Thai");
        out.push_back(static_cast<char>(cp - 0x0E00 + 0xA0));
        i += 3;
    }
    return out;
}

GeneratedCorpus generate_corpus(const CorpusSpec& spec, const GeoRegistry& registry,
                                const std::filesystem::path& outDir)
{
    if (spec.documents == 0 || spec.queries == 0 || spec.formats.empty())
        throw std::invalid_argument("corpus needs at least one document, query and format");
    if (spec.queries > queryPool().size())
        throw std::invalid_argument("corpus supports at most " + std::to_string(queryPool().size()) + " queries");
    for (const auto& f : spec.formats) {
        if (f != "txt" && f != "csv" && f != "html" && f != "pdf")
            throw std::invalid_argument("unsupported corpus format: " + f);
    }

    Rng rng(spec.seed);
    std::vector<std::string> districtCodes;
    for (const auto& [code, d] : registry.districts())
        districtCodes.push_back(code);
    if (districtCodes.empty())
        throw std::invalid_argument("registry has no districts");

    GeneratedCorpus out;
    out.dir = outDir;

    // Planted IDs.
    std::vector<std::string> planted;
    while (planted.size() < spec.planted) {
        const auto category = std::to_string(1 + rng.below(8));
        const auto& district = districtCodes[rng.below(districtCodes.size())];
        auto id = generate_valid_id(category + district, rng.digits(7), registry);
        if (out.planted.insert(id).second)
            planted.push_back(std::move(id));
    }

    // Decoys: each fails one validation stage or is not a standalone run.
    std::vector<std::string> decoys;
    for (std::size_t k = 0; k < spec.decoys; ++k) {
        std::string text;
        switch (k % 5) {
        case 0: {  // wrong check digit
            const auto base = generate_valid_id(std::to_string(1 + rng.below(8)) + districtCodes[rng.below(districtCodes.size())],
                                                rng.digits(7), registry);
            std::string bad = base;
            bad[12] = static_cast<char>('0' + (base[12] - '0' + 1 + rng.below(9)) % 10);
            text = k % 2 ? grouped(bad, '-', '-') : bad;
            break;
        }
        case 1: {  // district not in the registry
            std::string district;
            do {
                district = rng.digits(4);
            } while (registry.lookupDistrict(district));
            text = withCheckDigit(std::to_string(1 + rng.below(8)) + district + rng.digits(7));
            break;
        }
        case 2: {  // category outside 1-8
            const char category = k % 2 ? '9' : '0';
            text = withCheckDigit(std::string(1, category) + districtCodes[rng.below(districtCodes.size())] + rng.digits(7));
            break;
        }
        case 3:  // wrong length
            text = rng.below(2) ? rng.digits(12) : rng.digits(14);
            if (text.front() == '0')
                text.front() = '5';
            break;
        case 4: {  // valid ID inside a longer digit run
            const auto id = generate_valid_id(std::to_string(1 + rng.below(8)) + districtCodes[rng.below(districtCodes.size())],
                                              rng.digits(7), registry);
            text = k % 2 ? id + rng.digits(1) : rng.digits(1) + id;
            break;
        }
        }
        decoys.push_back(std::move(text));
    }
    out.decoys = decoys;

    // Documents.
    const std::size_t docCount = spec.documents + (spec.legacy_encoding_document ? 1 : 0);
    std::vector<Document> docs(docCount);
    for (std::size_t i = 0; i < spec.documents; ++i)
        docs[i].format = spec.formats[i % spec.formats.size()];
    if (spec.legacy_encoding_document)
        docs.back().format = "txt-legacy";

    std::vector<std::size_t> order(planted.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    rng.shuffle(order);
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const auto k = order[slot];
        const auto doc = slot % docCount;
        const bool legacy = docs[doc].format == "txt-legacy";
        Form form = static_cast<Form>(k % 6);
        if (legacy)
            form = k % 2 ? Form::Thai : Form::ThaiHyphen;
        docs[doc].items.push_back({render(planted[k], form), planted[k]});
        if (spec.repeat_every && k % spec.repeat_every == 0 && docCount > 1) {
            const auto second = (doc + 1) % docCount;
            Form again = static_cast<Form>((k + 1) % 6);
            if (docs[second].format == "txt-legacy")
                again = Form::Thai;
            docs[second].items.push_back({render(planted[k], again), planted[k]});
        }
    }
    for (std::size_t k = 0; k < decoys.size(); ++k)
        docs[(k * 7 + 3) % docCount].items.push_back({decoys[k], ""});
    for (auto& d : docs)
        rng.shuffle(d.items);

    std::filesystem::create_directories(outDir / "docs");
    ordered_json index;
    index["queries"] = ordered_json::object();
    index["objects"] = ordered_json::object();
    const auto& queryTexts = queryPool();
    for (std::size_t q = 0; q < spec.queries; ++q)
        index["queries"][queryTexts[q]] = ordered_json::array();

    for (std::size_t i = 0; i < docCount; ++i) {
        auto& d = docs[i];
        const auto ext = fileExt(d.format);
        const auto& host = hosts()[i % hosts().size()];
        const std::string scheme = isIpv4Literal(host) ? "http" : "https";
        if (d.format == "csv" && i % 7 == 5) {
            d.url = scheme + "://" + host + "/download.php?file=" + std::to_string(i + 1);
            d.content_disposition = "attachment; filename=\"roster-" + std::to_string(i + 1) + ".csv\"";
        } else {
            d.url = scheme + "://" + host + "/files/list-" + std::to_string(i + 1) + "." + ext;
        }
        d.relPath = std::filesystem::path("docs") / ("doc-" + std::to_string(i + 1) + "." + ext);

        auto body = renderBody(d, i);
        if (d.format == "pdf")
            body = encodeStubDocument(body);
        else if (d.format == "txt-legacy")
            body = encodeTis620(body);
        writeFile(outDir / d.relPath, body);

        const auto q = i % spec.queries;
        const int page = 1 + static_cast<int>((i / spec.queries) % 2);
        const int rank = 1 + static_cast<int>(i / (2 * spec.queries));
        index["queries"][queryTexts[q]].push_back({{"url", d.url}, {"page", page}, {"rank", rank}});
        ordered_json obj{{"path", d.relPath.generic_string()}};
        if (!d.content_disposition.empty())
            obj["content_disposition"] = d.content_disposition;
        index["objects"][d.url] = std::move(obj);

        for (const auto& item : d.items) {
            if (!item.id.empty())
                out.urls_per_id[item.id].insert(d.url);
        }
    }
    out.document_count = docCount;

    out.index_path = outDir / "index.json";
    writeFile(out.index_path, index.dump(2) + "\n");

    out.plan.queries.assign(queryTexts.begin(), queryTexts.begin() + static_cast<std::ptrdiff_t>(spec.queries));
    out.plan.engines = {Engine::Google};
    out.plan.max_pages = 10;
    out.plan.tags = {"synthetic"};
    out.plan_path = outDir / "plan.json";
    writeFile(out.plan_path, planToJson(out.plan));

    ordered_json truth;
    truth["seed"] = spec.seed;
    truth["planted"] = std::vector<std::string>(out.planted.begin(), out.planted.end());
    truth["decoys"] = out.decoys;
    ordered_json perId = ordered_json::object();
    for (const auto& [id, urls] : out.urls_per_id)
        perId[id] = std::vector<std::string>(urls.begin(), urls.end());
    truth["urls_per_id"] = std::move(perId);
    writeFile(outDir / "truth.json", truth.dump(2) + "\n");

    if (!spec.stub_command.empty()) {
        ordered_json ex = ordered_json::array();
        ex.push_back({{"name", "plain"}, {"kind", "plain"}, {"types", {"txt"}}});
        ex.push_back({{"name", "csv"}, {"kind", "csv"}, {"types", {"csv"}}});
        ex.push_back({{"name", "html"}, {"kind", "html"}, {"types", {"html"}}});
        ex.push_back({{"name", "stub-pdf"}, {"kind", "external"}, {"command", spec.stub_command}, {"types", {"pdf"}},
                      {"timeout_ms", 10000}});
        out.extractors_path = outDir / "extractors.json";
        writeFile(out.extractors_path, ex.dump(2) + "\n");
    }
    return out;
}

}  // namespace idexpose
