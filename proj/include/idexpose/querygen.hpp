// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idexpose/georegistry.hpp"

namespace idexpose {

class QueryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Advanced-search expression tree.
///
/// Leaves: Phrase, Exclude, FileType, Site, Placeholder.
/// Interior: Seq (implicit conjunction, space separated), And (explicit AND
/// token), Or, Group (parentheses).
class QueryExpr {
public:
    enum class Kind { Phrase, Exclude, FileType, Site, Placeholder, Seq, And, Or, Group };

    static QueryExpr phrase(std::string text, bool quoted = true);
    static QueryExpr word(std::string text) { return phrase(std::move(text), false); }
    static QueryExpr exclude(std::string term);
    static QueryExpr fileType(std::string ext);
    static QueryExpr site(std::string suffix);
    static QueryExpr placeholder(std::string name);
    static QueryExpr seq(std::vector<QueryExpr> children);
    static QueryExpr allOf(std::vector<QueryExpr> children);
    static QueryExpr anyOf(std::vector<QueryExpr> children);
    static QueryExpr group(QueryExpr child);

    Kind kind() const { return mKind; }
    const std::string& text() const { return mText; }
    bool quoted() const { return mQuoted; }
    const std::vector<QueryExpr>& children() const { return mChildren; }

    /// Placeholder names in first-appearance order, without duplicates.
    std::vector<std::string> placeholders() const;

    /// Replaces every placeholder with its bound value, parsed as a query
    /// fragment. Throws QueryError naming the first unbound placeholder.
    QueryExpr bind(const std::map<std::string, std::string>& values) const;

    bool operator==(const QueryExpr&) const = default;

private:
    QueryExpr(Kind kind, std::string text, bool quoted, std::vector<QueryExpr> children);

    Kind mKind;
    std::string mText;
    bool mQuoted = false;
    std::vector<QueryExpr> mChildren;
};

/// File types the search side may restrict to.
const std::set<std::string>& searchableFileTypes();

std::string render(const QueryExpr& expr);

/// Parses rendered query syntax back into a tree. OR binds tighter than AND,
/// AND tighter than juxtaposition. Throws QueryError on unbalanced quotes or
/// parentheses, dangling operators and unknown file types.
QueryExpr parseQuery(std::string_view text);

enum class Engine { Google, Bing };

std::string_view engineName(Engine engine);
Engine parseEngine(std::string_view name);

struct QueryPlan {
    std::vector<std::string> queries;
    std::set<Engine> engines{Engine::Google};
    int max_pages = 10;
    std::vector<std::string> tags;

    bool operator==(const QueryPlan&) const = default;
};

using Binding = std::map<std::string, std::string>;

/// Quoted prefix phrases "c-dddd-" for every (category, district) pair,
/// ordered by category then district code.
std::vector<std::string> prefix_dorks(const GeoRegistry& registry, const std::set<int>& categories);

QueryPlan build_plan(const QueryExpr& templ,
                     const std::vector<Binding>& bindings,
                     std::set<Engine> engines,
                     int max_pages,
                     std::vector<std::string> tags = {});

/// Checks the surface syntax of a rendered query: balanced quotes and
/// parentheses, operators only in uppercase, no dangling operator.
bool isWellFormedQuery(std::string_view text);

// File formats ------------------------------------------------------------

/// One template per line; blank lines and lines starting with '#' are skipped.
std::vector<QueryExpr> loadTemplates(std::istream& in);

/// Tab-separated: a header row of placeholder names, then one binding per row.
std::vector<Binding> loadBindings(std::istream& in);

/// JSON: {"queries": [...], "engines": [...], "max_pages": N, "tags": [...]}.
std::string planToJson(const QueryPlan& plan);
QueryPlan planFromJson(std::string_view json);

/// Accepts either the JSON form or plain text with one query per line.
QueryPlan loadPlanFile(const std::filesystem::path& path);

struct Keyword {
    std::string text;   // search text as sent to the engine
    std::string gloss;  // English translation, from the trailing comment
};

/// Keyword list file: "[section]" headers, then "text  # gloss" lines.
std::map<std::string, std::vector<Keyword>> loadKeywords(std::istream& in);

}  // namespace idexpose
