// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/querygen.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace idexpose {

namespace {

bool hasSpace(std::string_view s) { return s.find_first_of(" \t") != std::string_view::npos; }

std::string quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

void requireChildren(const std::vector<QueryExpr>& children, std::string_view node)
{
    if (children.empty())
        throw QueryError("empty " + std::string(node) + " node");
}

std::string join(const std::vector<QueryExpr>& children, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i)
            out += sep;
        out += render(children[i]);
    }
    return out;
}

// Tokenizer -----------------------------------------------------------------

enum class Tok { Phrase, Word, Exclude, FileType, Site, Placeholder, And, Or, LParen, RParen };

struct Token {
    Tok kind;
    std::string text;
    bool quoted = false;
};

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto readQuoted = [&](std::size_t open) {
        auto close = s.find('"', open + 1);
        if (close == std::string_view::npos)
            throw QueryError("unbalanced quote at offset " + std::to_string(open));
        std::string text(s.substr(open + 1, close - open - 1));
        i = close + 1;
        return text;
    };
    auto readBare = [&]() {
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '(' && s[i] != ')' && s[i] != '"')
            ++i;
        return std::string(s.substr(start, i - start));
    };

    while (i < s.size()) {
        const char c = s[i];
        if (c == ' ' || c == '\t') {
            ++i;
        } else if (c == '(') {
            out.push_back({Tok::LParen, "("});
            ++i;
        } else if (c == ')') {
            out.push_back({Tok::RParen, ")"});
            ++i;
        } else if (c == '"') {
            out.push_back({Tok::Phrase, readQuoted(i), true});
        } else if (c == '-' && i + 1 < s.size() && s[i + 1] != ' ') {
            ++i;
            if (s[i] == '"')
                out.push_back({Tok::Exclude, readQuoted(i), true});
            else
                out.push_back({Tok::Exclude, readBare()});
        } else if (c == '{') {
            auto close = s.find('}', i);
            if (close == std::string_view::npos)
                throw QueryError("unterminated placeholder at offset " + std::to_string(i));
            out.push_back({Tok::Placeholder, std::string(s.substr(i + 1, close - i - 1))});
            i = close + 1;
        } else {
            auto word = readBare();
            if (word == "AND")
                out.push_back({Tok::And, word});
            else if (word == "OR")
                out.push_back({Tok::Or, word});
            else if (word.rfind("filetype:", 0) == 0)
                out.push_back({Tok::FileType, word.substr(9)});
            else if (word.rfind("site:", 0) == 0)
                out.push_back({Tok::Site, word.substr(5)});
            else
                out.push_back({Tok::Word, word});
        }
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : mTokens(std::move(tokens)) {}

    QueryExpr parseAll()
    {
        auto expr = parseSeq();
        if (mPos != mTokens.size())
            throw QueryError("unexpected '" + mTokens[mPos].text + "'");
        return expr;
    }

private:
    bool atEnd() const { return mPos >= mTokens.size(); }
    bool peek(Tok kind) const { return !atEnd() && mTokens[mPos].kind == kind; }

    QueryExpr parseSeq()
    {
        std::vector<QueryExpr> items;
        while (!atEnd() && !peek(Tok::RParen))
            items.push_back(parseAnd());
        if (items.empty())
            throw QueryError("empty query");
        if (items.size() == 1)
            return std::move(items.front());
        return QueryExpr::seq(std::move(items));
    }

    QueryExpr parseAnd()
    {
        std::vector<QueryExpr> items;
        items.push_back(parseOr());
        while (peek(Tok::And)) {
            ++mPos;
            items.push_back(parseOr());
        }
        if (items.size() == 1)
            return std::move(items.front());
        return QueryExpr::allOf(std::move(items));
    }

    QueryExpr parseOr()
    {
        std::vector<QueryExpr> items;
        items.push_back(parsePrimary());
        while (peek(Tok::Or)) {
            ++mPos;
            items.push_back(parsePrimary());
        }
        if (items.size() == 1)
            return std::move(items.front());
        return QueryExpr::anyOf(std::move(items));
    }

    QueryExpr parsePrimary()
    {
        if (atEnd())
            throw QueryError("query ends with a dangling operator");
        Token t = mTokens[mPos++];
        switch (t.kind) {
        case Tok::Phrase:
            return QueryExpr::phrase(t.text, true);
        case Tok::Word:
            return QueryExpr::word(t.text);
        case Tok::Exclude:
            return QueryExpr::exclude(t.text);
        case Tok::FileType:
            return QueryExpr::fileType(t.text);
        case Tok::Site:
            return QueryExpr::site(t.text);
        case Tok::Placeholder:
            return QueryExpr::placeholder(t.text);
        case Tok::LParen: {
            auto inner = parseSeq();
            if (!peek(Tok::RParen))
                throw QueryError("unbalanced parenthesis");
            ++mPos;
            return QueryExpr::group(std::move(inner));
        }
        case Tok::RParen:
            throw QueryError("unbalanced parenthesis");
        case Tok::And:
        case Tok::Or:
            throw QueryError("operator '" + t.text + "' without left operand");
        }
        throw QueryError("unreachable token");
    }

    std::vector<Token> mTokens;
    std::size_t mPos = 0;
};

QueryExpr bindImpl(const QueryExpr& e, const std::map<std::string, std::string>& values)
{
    if (e.kind() == QueryExpr::Kind::Placeholder) {
        auto it = values.find(e.text());
        if (it == values.end())
            throw QueryError("unbound placeholder {" + e.text() + "}");
        return parseQuery(it->second);
    }
    if (e.children().empty())
        return e;
    std::vector<QueryExpr> kids;
    kids.reserve(e.children().size());
    for (const auto& c : e.children())
        kids.push_back(bindImpl(c, values));
    switch (e.kind()) {
    case QueryExpr::Kind::Seq:
        return QueryExpr::seq(std::move(kids));
    case QueryExpr::Kind::And:
        return QueryExpr::allOf(std::move(kids));
    case QueryExpr::Kind::Or:
        return QueryExpr::anyOf(std::move(kids));
    case QueryExpr::Kind::Group:
        return QueryExpr::group(std::move(kids.front()));
    default:
        return e;
    }
}

void collectPlaceholders(const QueryExpr& e, std::vector<std::string>& out)
{
    if (e.kind() == QueryExpr::Kind::Placeholder) {
        if (std::find(out.begin(), out.end(), e.text()) == out.end())
            out.push_back(e.text());
        return;
    }
    for (const auto& c : e.children())
        collectPlaceholders(c, out);
}

}  // namespace

QueryExpr::QueryExpr(Kind kind, std::string text, bool quoted, std::vector<QueryExpr> children)
    : mKind(kind), mText(std::move(text)), mQuoted(quoted), mChildren(std::move(children))
{
}

QueryExpr QueryExpr::phrase(std::string text, bool quoted)
{
    if (text.empty())
        throw QueryError("empty phrase");
    if (text.find('"') != std::string::npos)
        throw QueryError("phrase must not contain '\"'");
    return {Kind::Phrase, std::move(text), quoted, {}};
}

QueryExpr QueryExpr::exclude(std::string term)
{
    if (term.empty() || term.find('"') != std::string::npos)
        throw QueryError("invalid exclude term");
    return {Kind::Exclude, std::move(term), false, {}};
}

QueryExpr QueryExpr::fileType(std::string ext)
{
    if (!searchableFileTypes().count(ext))
        throw QueryError("unsupported filetype '" + ext + "'");
    return {Kind::FileType, std::move(ext), false, {}};
}

QueryExpr QueryExpr::site(std::string suffix)
{
    if (suffix.empty() || hasSpace(suffix))
        throw QueryError("invalid site suffix '" + suffix + "'");
    return {Kind::Site, std::move(suffix), false, {}};
}

QueryExpr QueryExpr::placeholder(std::string name)
{
    if (name.empty() || name.find_first_of("{} \t") != std::string::npos)
        throw QueryError("invalid placeholder name '" + name + "'");
    return {Kind::Placeholder, std::move(name), false, {}};
}

QueryExpr QueryExpr::seq(std::vector<QueryExpr> children)
{
    requireChildren(children, "sequence");
    return {Kind::Seq, {}, false, std::move(children)};
}

QueryExpr QueryExpr::allOf(std::vector<QueryExpr> children)
{
    requireChildren(children, "AND");
    return {Kind::And, {}, false, std::move(children)};
}

QueryExpr QueryExpr::anyOf(std::vector<QueryExpr> children)
{
    requireChildren(children, "OR");
    return {Kind::Or, {}, false, std::move(children)};
}

QueryExpr QueryExpr::group(QueryExpr child)
{
    std::vector<QueryExpr> kids;
    kids.push_back(std::move(child));
    return {Kind::Group, {}, false, std::move(kids)};
}

std::vector<std::string> QueryExpr::placeholders() const
{
    std::vector<std::string> out;
    collectPlaceholders(*this, out);
    return out;
}

QueryExpr QueryExpr::bind(const std::map<std::string, std::string>& values) const
{
    return bindImpl(*this, values);
}

const std::set<std::string>& searchableFileTypes()
{
    static const std::set<std::string> kTypes{"pdf", "xls", "xlsx", "doc", "docx"};
    return kTypes;
}

std::string render(const QueryExpr& expr)
{
    using K = QueryExpr::Kind;
    switch (expr.kind()) {
    case K::Phrase:
        // Multi-word phrases are always quoted so engines keep them together.
        return expr.quoted() || hasSpace(expr.text()) ? quote(expr.text()) : expr.text();
    case K::Exclude:
        return "-" + (hasSpace(expr.text()) ? quote(expr.text()) : expr.text());
    case K::FileType:
        return "filetype:" + expr.text();
    case K::Site:
        return "site:" + expr.text();
    case K::Placeholder:
        return "{" + expr.text() + "}";
    case K::Seq:
        return join(expr.children(), " ");
    case K::And:
        return join(expr.children(), " AND ");
    case K::Or:
        return join(expr.children(), " OR ");
    case K::Group:
        return "(" + render(expr.children().front()) + ")";
    }
    return {};
}

QueryExpr parseQuery(std::string_view text) { return Parser(tokenize(text)).parseAll(); }

bool isWellFormedQuery(std::string_view text)
{
    int depth = 0;
    bool inQuote = false;
    bool expectOperand = true;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (inQuote) {
            if (c == '"')
                inQuote = false;
            ++i;
            continue;
        }
        if (c == '"') {
            inQuote = true;
            expectOperand = false;
            ++i;
        } else if (c == '(') {
            ++depth;
            expectOperand = true;
            ++i;
        } else if (c == ')') {
            if (--depth < 0 || expectOperand)
                return false;
            ++i;
        } else if (c == ' ') {
            ++i;
        } else {
            std::size_t start = i;
            while (i < text.size() && text[i] != ' ' && text[i] != '(' && text[i] != ')' && text[i] != '"')
                ++i;
            auto word = text.substr(start, i - start);
            std::string lower(word);
            std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
            if (lower == "and" || lower == "or") {
                if (word != "AND" && word != "OR")
                    return false;
                if (expectOperand)
                    return false;
                expectOperand = true;
            } else {
                expectOperand = false;
            }
        }
    }
    return !inQuote && depth == 0 && !expectOperand;
}

std::string_view engineName(Engine engine) { return engine == Engine::Google ? "google" : "bing"; }

Engine parseEngine(std::string_view name)
{
    if (name == "google")
        return Engine::Google;
    if (name == "bing")
        return Engine::Bing;
    throw QueryError("unknown search engine '" + std::string(name) + "'");
}

std::vector<std::string> prefix_dorks(const GeoRegistry& registry, const std::set<int>& categories)
{
    std::vector<std::string> out;
    out.reserve(categories.size() * registry.districts().size());
    for (int c : categories) {
        if (c < 1 || c > 8)
            throw QueryError("category digit must be 1..8, got " + std::to_string(c));
        for (const auto& [code, district] : registry.districts())
            out.push_back(quote(std::to_string(c) + "-" + code + "-"));
    }
    return out;
}

QueryPlan build_plan(const QueryExpr& templ,
                     const std::vector<Binding>& bindings,
                     std::set<Engine> engines,
                     int max_pages,
                     std::vector<std::string> tags)
{
    if (bindings.empty())
        throw QueryError("query plan needs at least one binding");
    if (max_pages < 1)
        throw QueryError("max_pages must be at least 1");
    if (engines.empty())
        throw QueryError("query plan needs at least one engine");
    QueryPlan plan;
    plan.engines = std::move(engines);
    plan.max_pages = max_pages;
    plan.tags = std::move(tags);
    plan.queries.reserve(bindings.size());
    for (const auto& b : bindings)
        plan.queries.push_back(render(templ.bind(b)));
    return plan;
}

std::vector<QueryExpr> loadTemplates(std::istream& in)
{
    std::vector<QueryExpr> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        try {
            out.push_back(parseQuery(line));
        } catch (const QueryError& e) {
            throw QueryError("template line " + std::to_string(row) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Binding> loadBindings(std::istream& in)
{
    auto splitTabs = [](const std::string& line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            auto pos = line.find('\t', start);
            cells.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
            if (pos == std::string::npos)
                return cells;
            start = pos + 1;
        }
    };

    std::vector<Binding> out;
    std::vector<std::string> header;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        auto cells = splitTabs(line);
        if (header.empty()) {
            header = std::move(cells);
            continue;
        }
        if (cells.size() != header.size())
            throw QueryError("bindings row " + std::to_string(row) + ": expected " + std::to_string(header.size())
                             + " columns, got " + std::to_string(cells.size()));
        Binding b;
        for (std::size_t i = 0; i < header.size(); ++i)
            b.emplace(header[i], cells[i]);
        out.push_back(std::move(b));
    }
    return out;
}

std::string planToJson(const QueryPlan& plan)
{
    nlohmann::ordered_json j;
    j["queries"] = plan.queries;
    auto engines = nlohmann::ordered_json::array();
    for (auto e : plan.engines)
        engines.push_back(std::string(engineName(e)));
    j["engines"] = engines;
    j["max_pages"] = plan.max_pages;
    j["tags"] = plan.tags;
    return j.dump(2) + "\n";
}

QueryPlan planFromJson(std::string_view json)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw QueryError(std::string("invalid plan JSON: ") + e.what());
    }
    QueryPlan plan;
    try {
        plan.queries = j.at("queries").get<std::vector<std::string>>();
        if (j.contains("engines")) {
            plan.engines.clear();
            for (const auto& e : j.at("engines"))
                plan.engines.insert(parseEngine(e.get<std::string>()));
        }
        plan.max_pages = j.value("max_pages", 10);
        plan.tags = j.value("tags", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
        throw QueryError(std::string("invalid plan JSON: ") + e.what());
    }
    if (plan.queries.empty())
        throw QueryError("plan has no queries");
    if (plan.max_pages < 1)
        throw QueryError("max_pages must be at least 1");
    if (plan.engines.empty())
        throw QueryError("plan has no engines");
    return plan;
}

QueryPlan loadPlanFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw QueryError("cannot open plan file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw QueryError("plan file " + path.string() + " is empty");
    if (text[first] == '{')
        return planFromJson(text);

    QueryPlan plan;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#')
            continue;
        plan.queries.push_back(line.substr(start));
    }
    if (plan.queries.empty())
        throw QueryError("plan file " + path.string() + " has no queries");
    return plan;
}

std::map<std::string, std::vector<Keyword>> loadKeywords(std::istream& in)
{
    std::map<std::string, std::vector<Keyword>> out;
    std::string section;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#')
            continue;
        if (line[start] == '[') {
            auto close = line.find(']', start);
            if (close == std::string::npos)
                throw QueryError("malformed keyword section header: " + line);
            section = line.substr(start + 1, close - start - 1);
            continue;
        }
        if (section.empty())
            throw QueryError("keyword outside of a section: " + line);
        Keyword kw;
        auto hash = line.find('#', start);
        std::string text = line.substr(start, hash == std::string::npos ? std::string::npos : hash - start);
        text.erase(text.find_last_not_of(" \t") + 1);
        kw.text = text;
        if (hash != std::string::npos) {
            auto g = line.find_first_not_of(" \t", hash + 1);
            if (g != std::string::npos)
                kw.gloss = line.substr(g);
        }
        out[section].push_back(std::move(kw));
    }
    return out;
}

}  // namespace idexpose
