// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/analytics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "idexpose/url.hpp"

namespace idexpose {

namespace {

constexpr const char* kBuiltinSuffixes = R"(// Thailand
th
go.th
ac.th
co.th
mi.th
or.th
in.th
net.th
// generic
com
org
net
edu
gov
int
mil
info
biz
io
app
dev
xyz
online
site
ac
co
// country codes seen alongside Thai hosting
uk
co.uk
org.uk
ac.uk
gov.uk
jp
co.jp
ac.jp
go.jp
or.jp
ne.jp
cn
com.cn
au
com.au
sg
com.sg
my
com.my
la
com.la
kh
com.kh
mm
com.mm
vn
com.vn
us
de
fr
)";

std::vector<std::string_view> labelsOf(std::string_view host)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto dot = host.find('.', start);
        out.push_back(host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos)
            return out;
        start = dot + 1;
    }
}

std::string joinLabels(const std::vector<std::string_view>& labels, std::size_t from)
{
    std::string out;
    for (std::size_t i = from; i < labels.size(); ++i) {
        if (i > from)
            out.push_back('.');
        out.append(labels[i]);
    }
    return out;
}

std::string tldDescription(const DomainInfo& d)
{
    switch (d.tld_class) {
    case TldClass::GoTh:
        return "Government";
    case TldClass::AcTh:
        return "Academic";
    case TldClass::CoTh:
        return "Commercial";
    case TldClass::MiTh:
        return "Military";
    case TldClass::OrTh:
        return "Non-profit";
    case TldClass::InTh:
        return "Individual";
    case TldClass::NetTh:
        return "Network operator";
    case TldClass::IpAddress:
        return "IP literal";
    default:
        return "";
    }
}

std::string fileTypeFamily(std::string_view ext)
{
    if (ext == "xls" || ext == "xlsx")
        return "Spreadsheet";
    if (ext == "pdf")
        return "PDF";
    if (ext == "doc" || ext == "docx")
        return "Word";
    if (ext == "txt")
        return "Text";
    if (ext == "csv")
        return "CSV";
    if (ext == "html")
        return "HTML";
    return "Other";
}

// Distinct-value accumulator per row key.
struct Bucket {
    std::unordered_set<std::string> urls;
    std::unordered_set<std::string> files;
    std::unordered_set<std::string> fqdns;
    std::unordered_set<std::string> domains;
    std::unordered_set<std::string> ids;
    std::string label;

    void add(const ExposureRecord& r)
    {
        urls.insert(r.url);
        files.insert(r.sha256);
        fqdns.insert(r.domain.fqdn);
        if (r.domain.registered_domain)
            domains.insert(*r.domain.registered_domain);
        ids.insert(r.id);
    }

    AggregateRow row(std::string key) const
    {
        AggregateRow out;
        out.key = std::move(key);
        out.label = label;
        out.urls = urls.size();
        out.files = files.size();
        out.fqdns = fqdns.size();
        out.registered_domains = domains.size();
        out.unique_ids = ids.size();
        return out;
    }
};

void sortByCount(std::vector<AggregateRow>& rows)
{
    std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
        if (a.unique_ids != b.unique_ids)
            return a.unique_ids > b.unique_ids;
        return a.key < b.key;
    });
}

void sortByPercent(std::vector<AggregateRow>& rows)
{
    // Exact comparison of unique_ids / population via cross multiplication;
    // rows without a population go last.
    std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
        const bool ap = a.population && *a.population > 0;
        const bool bp = b.population && *b.population > 0;
        if (ap != bp)
            return ap;
        if (ap) {
            const auto lhs = static_cast<unsigned __int128>(a.unique_ids) * *b.population;
            const auto rhs = static_cast<unsigned __int128>(b.unique_ids) * *a.population;
            if (lhs != rhs)
                return lhs > rhs;
        }
        if (a.unique_ids != b.unique_ids)
            return a.unique_ids > b.unique_ids;
        return a.key < b.key;
    });
}

std::uint64_t countDistinctIds(const std::vector<ExposureRecord>& records)
{
    std::unordered_set<std::string> ids;
    for (const auto& r : records)
        ids.insert(r.id);
    return ids.size();
}

}  // namespace

// PublicSuffixList --------------------------------------------------------

PublicSuffixList PublicSuffixList::parse(std::istream& in)
{
    PublicSuffixList psl;
    std::string line;
    while (std::getline(in, line)) {
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos)
            continue;
        auto end = line.find_first_of(" \t\r", start);
        std::string rule = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (rule.rfind("//", 0) == 0)
            continue;
        std::transform(rule.begin(), rule.end(), rule.begin(), [](unsigned char c) { return std::tolower(c); });
        if (rule.rfind("*.", 0) == 0)
            psl.mWildcards.insert(rule.substr(2));
        else if (rule.front() == '!')
            psl.mExceptions.insert(rule.substr(1));
        else
            psl.mRules.insert(rule);
    }
    return psl;
}

PublicSuffixList PublicSuffixList::parse(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse(in);
}

PublicSuffixList PublicSuffixList::loadFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open public suffix list " + path.string());
    return parse(in);
}

const PublicSuffixList& PublicSuffixList::builtin()
{
    static const PublicSuffixList kList = parse(std::string_view(kBuiltinSuffixes));
    return kList;
}

std::string PublicSuffixList::publicSuffix(std::string_view host) const
{
    const auto labels = labelsOf(host);
    // Scan from the longest candidate; the first hit is the longest match.
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto candidate = joinLabels(labels, i);
        if (mExceptions.count(candidate))
            return joinLabels(labels, i + 1);
        if (mRules.count(candidate))
            return candidate;
        if (i + 1 < labels.size() && mWildcards.count(joinLabels(labels, i + 1)))
            return candidate;
    }
    return std::string(labels.back());
}

std::optional<std::string> PublicSuffixList::registeredDomain(std::string_view host) const
{
    const auto suffix = publicSuffix(host);
    if (suffix.size() >= host.size())
        return std::nullopt;
    const auto head = host.substr(0, host.size() - suffix.size() - 1);
    const auto dot = head.rfind('.');
    const auto label = dot == std::string_view::npos ? head : head.substr(dot + 1);
    if (label.empty())
        return std::nullopt;
    return std::string(label) + "." + suffix;
}

// TagMap ------------------------------------------------------------------

TagMap TagMap::parse(std::istream& in)
{
    TagMap map;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == line.size())
            throw std::invalid_argument("tag file row " + std::to_string(row) + ": expected domain,tag");
        map.add(line.substr(0, comma), line.substr(comma + 1));
    }
    return map;
}

TagMap TagMap::loadFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open tag file " + path.string());
    return parse(in);
}

void TagMap::add(std::string domain, std::string tag)
{
    std::transform(domain.begin(), domain.end(), domain.begin(), [](unsigned char c) { return std::tolower(c); });
    mTags[std::move(domain)] = std::move(tag);
}

std::optional<std::string> TagMap::lookup(std::string_view registeredDomain) const
{
    auto it = mTags.find(registeredDomain);
    if (it == mTags.end())
        return std::nullopt;
    return it->second;
}

// Classification ----------------------------------------------------------

std::string DomainInfo::tldKey() const
{
    switch (tld_class) {
    case TldClass::GoTh:
        return "go.th";
    case TldClass::AcTh:
        return "ac.th";
    case TldClass::CoTh:
        return "co.th";
    case TldClass::MiTh:
        return "mi.th";
    case TldClass::OrTh:
        return "or.th";
    case TldClass::InTh:
        return "in.th";
    case TldClass::NetTh:
        return "net.th";
    case TldClass::Com:
        return "com";
    case TldClass::Org:
        return "org";
    case TldClass::Net:
        return "net";
    case TldClass::IpAddress:
        return "ip_address";
    case TldClass::Other:
        return other_label;
    }
    return other_label;
}

DomainInfo classify_url(std::string_view url, const PublicSuffixList& psl, const TagMap* tags)
{
    auto parsed = parseUrl(url);
    if (!parsed)
        throw ClassificationError("unparsable URL: " + std::string(url));

    DomainInfo info;
    info.url = std::string(url);
    info.fqdn = parsed->host;
    if (parsed->host_is_ip) {
        info.tld_class = TldClass::IpAddress;
        return info;
    }

    static const std::map<std::string_view, TldClass> kThaiSlds{
        {"go", TldClass::GoTh}, {"ac", TldClass::AcTh}, {"co", TldClass::CoTh},   {"mi", TldClass::MiTh},
        {"or", TldClass::OrTh}, {"in", TldClass::InTh}, {"net", TldClass::NetTh},
    };
    const auto labels = labelsOf(info.fqdn);
    const auto last = labels.back();
    info.tld_class = TldClass::Other;
    info.other_label = std::string(last);
    if (last == "th" && labels.size() >= 2) {
        if (auto it = kThaiSlds.find(labels[labels.size() - 2]); it != kThaiSlds.end()) {
            info.tld_class = it->second;
            info.other_label.clear();
        }
    } else if (last == "com") {
        info.tld_class = TldClass::Com;
    } else if (last == "org") {
        info.tld_class = TldClass::Org;
    } else if (last == "net") {
        info.tld_class = TldClass::Net;
    }
    if (info.tld_class != TldClass::Other)
        info.other_label.clear();

    info.registered_domain = psl.registeredDomain(info.fqdn);
    if (tags && info.registered_domain)
        info.owner_tag = tags->lookup(*info.registered_domain);
    return info;
}

std::vector<ExposureRecord> buildRecords(const std::vector<StoredExposure>& stored,
                                         const PublicSuffixList& psl,
                                         const TagMap* tags,
                                         std::vector<Diagnostic>* diagnostics)
{
    std::vector<ExposureRecord> out;
    out.reserve(stored.size());
    std::set<std::string> reported;
    for (const auto& s : stored) {
        ExposureRecord r;
        try {
            r.domain = classify_url(s.url, psl, tags);
        } catch (const ClassificationError& e) {
            if (diagnostics && reported.insert(s.url).second)
                diagnostics->push_back({s.url, e.what()});
            continue;
        }
        r.id = s.national_id;
        r.category = s.national_id.empty() ? 0 : s.national_id[0] - '0';
        if (s.national_id.size() >= 5) {
            r.province_code = s.national_id.substr(1, 2);
            r.district_code = s.national_id.substr(1, 4);
        }
        r.sha256 = s.sha256;
        r.url = s.url;
        r.file_type = s.file_type;
        r.query = s.query;
        r.engine = s.engine;
        r.page_number = s.page_number;
        r.first_seen = s.first_seen;
        out.push_back(std::move(r));
    }
    return out;
}

// Aggregation -------------------------------------------------------------

std::string Percent::str() const
{
    std::int64_t scale = 1;
    for (int i = 0; i < decimals; ++i)
        scale *= 10;
    const bool negative = scaled < 0;
    const auto mag = negative ? -scaled : scaled;
    std::string out = (negative ? "-" : "") + std::to_string(mag / scale);
    if (decimals > 0) {
        auto frac = std::to_string(mag % scale);
        out += "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
    }
    return out;
}

double Percent::value() const
{
    double scale = 1;
    for (int i = 0; i < decimals; ++i)
        scale *= 10;
    return static_cast<double>(scaled) / scale;
}

Percent roundedPercent(std::uint64_t numerator, std::uint64_t denominator, int decimals)
{
    if (denominator == 0)
        throw std::invalid_argument("percent of a zero denominator");
    unsigned __int128 scale = 100;
    for (int i = 0; i < decimals; ++i)
        scale *= 10;
    // floor(x + 1/2) with x = numerator * scale / denominator, in integers.
    const unsigned __int128 num = static_cast<unsigned __int128>(numerator) * scale * 2 + denominator;
    const unsigned __int128 den = static_cast<unsigned __int128>(denominator) * 2;
    return {static_cast<std::int64_t>(num / den), decimals};
}

std::string_view dimensionName(Dimension d)
{
    switch (d) {
    case Dimension::FileType:
        return "file_type";
    case Dimension::Tld:
        return "tld";
    case Dimension::RegisteredDomain:
        return "registered_domain";
    case Dimension::OwnerTag:
        return "owner_tag";
    case Dimension::Query:
        return "query";
    case Dimension::CategoryDigit:
        return "category_digit";
    case Dimension::ResultPage:
        return "result_page";
    }
    return "unknown";
}

std::optional<Dimension> parseDimension(std::string_view name)
{
    for (auto d : {Dimension::FileType, Dimension::Tld, Dimension::RegisteredDomain, Dimension::OwnerTag,
                   Dimension::Query, Dimension::CategoryDigit, Dimension::ResultPage}) {
        if (dimensionName(d) == name)
            return d;
    }
    return std::nullopt;
}

AggregateTable aggregate(const std::vector<ExposureRecord>& records, Dimension dimension)
{
    std::map<std::string, Bucket> buckets;
    for (const auto& r : records) {
        std::string key;
        std::string label;
        switch (dimension) {
        case Dimension::FileType:
            key = r.file_type;
            label = fileTypeFamily(r.file_type);
            break;
        case Dimension::Tld:
            key = r.domain.tldKey();
            label = tldDescription(r.domain);
            break;
        case Dimension::RegisteredDomain:
            key = r.domain.registered_domain.value_or(r.domain.fqdn);
            label = r.domain.owner_tag.value_or("");
            break;
        case Dimension::OwnerTag:
            key = r.domain.owner_tag.value_or("(untagged)");
            break;
        case Dimension::Query:
            key = r.query;
            label = std::string(engineName(r.engine));
            break;
        case Dimension::CategoryDigit:
            key = std::to_string(r.category);
            label = std::string(categoryDescription(r.category));
            break;
        case Dimension::ResultPage:
            key = std::to_string(r.page_number);
            break;
        }
        auto& b = buckets[key];
        if (b.label.empty())
            b.label = label;
        b.add(r);
    }

    AggregateTable table;
    table.dimension = std::string(dimensionName(dimension));
    table.total_unique_ids = countDistinctIds(records);
    for (auto& [key, b] : buckets)
        table.rows.push_back(b.row(key));
    sortByCount(table.rows);
    return table;
}

std::pair<AggregateTable, AggregateTable> geographic_report(const std::vector<ExposureRecord>& records,
                                                            const GeoRegistry& registry,
                                                            GeoOrder order)
{
    std::map<std::string, Bucket> provinces;
    std::map<std::string, Bucket> districts;
    for (const auto& r : records) {
        if (r.id.size() < 5)
            continue;
        const auto pcode = r.id.substr(1, 2);
        const auto dcode = r.id.substr(1, 4);
        provinces[pcode].add(r);
        districts[dcode].add(r);
    }

    const auto total = countDistinctIds(records);
    auto finish = [&](std::map<std::string, Bucket>& buckets, bool isDistrict) {
        AggregateTable t;
        t.dimension = isDistrict ? "district" : "province";
        t.total_unique_ids = total;
        for (auto& [code, b] : buckets) {
            if (b.ids.empty())
                continue;
            auto row = b.row(code);
            if (isDistrict) {
                if (auto d = registry.lookupDistrict(code))
                    row.label = d->name;
            } else if (auto p = registry.lookupProvince(code)) {
                row.label = p->name;
            }
            if (auto pop = registry.populationOf(code)) {
                row.population = *pop;
                if (*pop > 0)
                    row.percent = roundedPercent(row.unique_ids, *pop, 2);
            }
            t.rows.push_back(std::move(row));
        }
        if (order == GeoOrder::ByPercent)
            sortByPercent(t.rows);
        else
            sortByCount(t.rows);
        return t;
    };
    return {finish(provinces, false), finish(districts, true)};
}

AggregateTable repeat_exposure(const std::vector<ExposureRecord>& records)
{
    std::unordered_map<std::string, std::unordered_set<std::string>> urlsPerId;
    for (const auto& r : records)
        urlsPerId[r.id].insert(r.url);

    std::map<std::uint64_t, std::uint64_t, std::greater<>> idsByMultiplicity;
    for (const auto& [id, urls] : urlsPerId)
        ++idsByMultiplicity[urls.size()];

    AggregateTable t;
    t.dimension = "source_url_multiplicity";
    t.total_unique_ids = urlsPerId.size();
    for (const auto& [multiplicity, count] : idsByMultiplicity) {
        AggregateRow row;
        row.key = std::to_string(multiplicity);
        row.unique_ids = count;
        row.percent = roundedPercent(count, t.total_unique_ids, 4);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace idexpose
