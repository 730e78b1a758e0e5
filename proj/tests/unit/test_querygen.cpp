// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "idexpose/querygen.hpp"
#include "support.hpp"

using namespace idexpose;
using Q = QueryExpr;

namespace {

// Independent balance check: quotes paired, parentheses nested, and every
// bare and/or in uppercase.
bool referenceTokenizerAccepts(const std::string& s)
{
    int depth = 0;
    bool inQuote = false;
    std::string word;
    auto flush = [&] {
        if (word == "and" || word == "or" || word == "And" || word == "Or")
            return false;
        word.clear();
        return true;
    };
    for (char c : s) {
        if (c == '"') {
            inQuote = !inQuote;
            continue;
        }
        if (inQuote)
            continue;
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth < 0)
                return false;
        }
        if (c == ' ' || c == '(' || c == ')') {
            if (!flush())
                return false;
        } else {
            word.push_back(c);
        }
    }
    return !inQuote && depth == 0 && flush();
}

}  // namespace

TEST(Render, FiveExampleStrings)
{
    const auto a = Q::seq({Q::site("ac.th"), Q::anyOf({Q::fileType("xlsx"), Q::fileType("xls")}), Q::phrase("number"),
                           Q::phrase("citizen"), Q::phrase("Mr.")});
    EXPECT_EQ(render(a), R"(site:ac.th filetype:xlsx OR filetype:xls "number" "citizen" "Mr.")");

    const auto b = Q::seq({Q::fileType("xls"), Q::phrase("National ID number"), Q::phrase("name")});
    EXPECT_EQ(render(b), R"(filetype:xls "National ID number" "name")");

    const auto c = Q::seq({Q::fileType("pdf"), Q::phrase("1-3501-"), Q::phrase("number"), Q::phrase("citizen")});
    EXPECT_EQ(render(c), R"(filetype:pdf "1-3501-" "number" "citizen")");

    const auto d = Q::seq({Q::phrase("certificate of tax withholding"), Q::fileType("pdf"), Q::site("go.th"),
                           Q::group(Q::allOf({Q::phrase("Miss"), Q::phrase("Mr.")}))});
    EXPECT_EQ(render(d), R"("certificate of tax withholding" filetype:pdf site:go.th ("Miss" AND "Mr."))");

    const auto e = Q::seq({Q::fileType("pdf"),
                           Q::group(Q::anyOf({Q::phrase("ID card number"), Q::phrase("National ID number"), Q::phrase("number")})),
                           Q::phrase("list"), Q::phrase("1-1001-")});
    EXPECT_EQ(render(e), R"(filetype:pdf ("ID card number" OR "National ID number" OR "number") "list" "1-1001-")");
}

TEST(Render, OperatorSyntaxExamples)
{
    EXPECT_EQ(render(Q::allOf({Q::word("dog"), Q::group(Q::anyOf({Q::phrase("cat"), Q::phrase("bird")}))})),
              R"(dog AND ("cat" OR "bird"))");
    EXPECT_EQ(render(Q::seq({Q::site("example.com"), Q::fileType("pdf"),
                             Q::allOf({Q::phrase("dog"), Q::group(Q::anyOf({Q::phrase("cat"), Q::phrase("bird")}))})})),
              R"(site:example.com filetype:pdf "dog" AND ("cat" OR "bird"))");
    EXPECT_EQ(render(Q::word("dog")), "dog");
    EXPECT_EQ(render(Q::exclude("cat")), "-cat");
    EXPECT_EQ(render(Q::exclude("two words")), R"(-"two words")");
    EXPECT_EQ(render(Q::word("two words")), R"("two words")");
}

TEST(Render, ConstructionErrors)
{
    EXPECT_THROW(Q::allOf({}), QueryError);
    EXPECT_THROW(Q::anyOf({}), QueryError);
    EXPECT_THROW(Q::seq({}), QueryError);
    EXPECT_THROW(Q::fileType("exe"), QueryError);
    EXPECT_THROW(Q::fileType("txt"), QueryError);
    EXPECT_THROW(Q::phrase(""), QueryError);
    EXPECT_THROW(Q::phrase("a\"b"), QueryError);
    EXPECT_THROW(Q::site("a b"), QueryError);
    EXPECT_THROW(Q::placeholder("a b"), QueryError);
}

TEST(Parse, RoundTripsExampleStrings)
{
    const std::vector<std::string> examples{
        R"(site:ac.th filetype:xlsx OR filetype:xls "number" "citizen" "Mr.")",
        R"(filetype:xls "National ID number" "name")",
        R"(filetype:pdf "1-3501-" "number" "citizen")",
        R"("certificate of tax withholding" filetype:pdf site:go.th ("Miss" AND "Mr."))",
        R"(filetype:pdf ("ID card number" OR "National ID number" OR "number") "list" "1-1001-")",
        R"(dog AND ("cat" OR "bird"))",
        R"(site:example.com filetype:pdf "dog" AND ("cat" OR "bird"))",
        R"(-spam "เลขประจำตัวประชาชน" {prefix})",
    };
    for (const auto& s : examples) {
        const auto parsed = parseQuery(s);
        EXPECT_EQ(render(parsed), s);
        EXPECT_EQ(parseQuery(render(parsed)), parsed);
    }
}

TEST(Parse, Precedence)
{
    // OR binds tighter than AND, which binds tighter than juxtaposition.
    const auto e = parseQuery("a b AND c OR d");
    ASSERT_EQ(e.kind(), Q::Kind::Seq);
    ASSERT_EQ(e.children().size(), 2u);
    const auto& conj = e.children()[1];
    ASSERT_EQ(conj.kind(), Q::Kind::And);
    EXPECT_EQ(conj.children()[1].kind(), Q::Kind::Or);
}

TEST(Parse, Errors)
{
    EXPECT_THROW(parseQuery(""), QueryError);
    EXPECT_THROW(parseQuery("\"open"), QueryError);
    EXPECT_THROW(parseQuery("(a b"), QueryError);
    EXPECT_THROW(parseQuery("a b)"), QueryError);
    EXPECT_THROW(parseQuery("AND a"), QueryError);
    EXPECT_THROW(parseQuery("a OR"), QueryError);
    EXPECT_THROW(parseQuery("filetype:exe"), QueryError);
    EXPECT_THROW(parseQuery("{open"), QueryError);
}

TEST(Parse, WellFormedCheck)
{
    EXPECT_TRUE(isWellFormedQuery(R"(a AND ("b" OR c))"));
    EXPECT_FALSE(isWellFormedQuery(R"(a and b)"));
    EXPECT_FALSE(isWellFormedQuery(R"("a)"));
    EXPECT_FALSE(isWellFormedQuery(R"((a)"));
    EXPECT_FALSE(isWellFormedQuery(R"(a AND)"));
}

TEST(RenderProperty, RandomTreesRoundTrip)
{
    std::mt19937_64 rng(11);
    const std::vector<std::string> words{"ทะเบียน", "list", "Mr.", "National ID", "1-1001-", "a b c"};
    std::function<Q(int)> make = [&](int depth) -> Q {
        const auto pick = depth <= 0 ? rng() % 4 : rng() % 8;
        switch (pick) {
        case 0:
            return Q::phrase(words[rng() % words.size()], rng() % 2);
        case 1:
            return Q::fileType(*std::next(searchableFileTypes().begin(), static_cast<long>(rng() % 5)));
        case 2:
            return Q::site(rng() % 2 ? "go.th" : "ac.th");
        case 3:
            return Q::exclude(words[rng() % words.size()]);
        case 4:
        case 5: {
            std::vector<Q> kids;
            for (int i = 0, n = 2 + static_cast<int>(rng() % 2); i < n; ++i)
                kids.push_back(make(depth - 1));
            return Q::group(pick == 4 ? Q::anyOf(std::move(kids)) : Q::allOf(std::move(kids)));
        }
        default: {
            std::vector<Q> kids;
            for (int i = 0, n = 2 + static_cast<int>(rng() % 3); i < n; ++i)
                kids.push_back(make(depth - 1));
            return Q::group(Q::seq(std::move(kids)));
        }
        }
    };
    for (int i = 0; i < 500; ++i) {
        const auto tree = make(3);
        const auto text = render(tree);
        EXPECT_TRUE(referenceTokenizerAccepts(text)) << text;
        EXPECT_TRUE(isWellFormedQuery(text)) << text;
        EXPECT_EQ(render(parseQuery(text)), text);
    }
}

TEST(PrefixDorks, ShapeAndOrder)
{
    const auto r = GeoRegistry::load("P,10,Bangkok\nP,20,Chonburi\nD,1001,Phra Nakhon\nD,2007,Si Racha\n");
    EXPECT_EQ(prefix_dorks(r, {1}), (std::vector<std::string>{R"("1-1001-")", R"("1-2007-")"}));
    const auto both = prefix_dorks(r, {3, 1});
    EXPECT_EQ(both, (std::vector<std::string>{R"("1-1001-")", R"("1-2007-")", R"("3-1001-")", R"("3-2007-")"}));
    EXPECT_TRUE(prefix_dorks(r, {}).empty());
    EXPECT_THROW(prefix_dorks(r, {9}), QueryError);
}

TEST(PrefixDorks, SizeLawOnShippedRegistry)
{
    const auto& r = testsupport::registry();
    for (const std::set<int>& cats : {std::set<int>{1}, std::set<int>{1, 2, 3}, std::set<int>{1, 2, 3, 4, 5, 6, 7, 8}})
        EXPECT_EQ(prefix_dorks(r, cats).size(), cats.size() * r.districts().size());
}

TEST(BuildPlan, BindsPlaceholders)
{
    const auto templ = parseQuery(R"(filetype:pdf {prefix} "number" "citizen")");
    EXPECT_EQ(templ.placeholders(), std::vector<std::string>{"prefix"});
    const auto plan =
        build_plan(templ, {{{"prefix", R"("1-3501-")"}}, {{"prefix", R"("1-1001-")"}}}, {Engine::Google, Engine::Bing}, 5,
                   {"prefix"});
    ASSERT_EQ(plan.queries.size(), 2u);
    EXPECT_EQ(plan.queries[0], R"(filetype:pdf "1-3501-" "number" "citizen")");
    EXPECT_EQ(plan.queries[1], R"(filetype:pdf "1-1001-" "number" "citizen")");
    EXPECT_EQ(plan.engines.size(), 2u);
    EXPECT_EQ(plan.max_pages, 5);
}

TEST(BuildPlan, Errors)
{
    const auto templ = parseQuery(R"(filetype:pdf {prefix} {term})");
    try {
        build_plan(templ, {{{"prefix", "x"}}}, {Engine::Google}, 1);
        FAIL() << "expected an unbound placeholder error";
    } catch (const QueryError& e) {
        EXPECT_NE(std::string(e.what()).find("{term}"), std::string::npos);
    }
    EXPECT_THROW(build_plan(templ, {}, {Engine::Google}, 1), QueryError);
    EXPECT_THROW(build_plan(parseQuery("a"), {{}}, {Engine::Google}, 0), QueryError);
    EXPECT_THROW(build_plan(parseQuery("a"), {{}}, {}, 1), QueryError);
}

TEST(BuildPlan, NoPlaceholdersIsIdentity)
{
    const auto templ = parseQuery(R"(filetype:xls "National ID number" "name")");
    const auto plan = build_plan(templ, {{}}, {Engine::Google}, 10);
    EXPECT_EQ(plan.queries, std::vector<std::string>{render(templ)});
}

TEST(ShippedTemplates, InjectiveOverBindings)
{
    std::ifstream tin(testsupport::dataDir() / "templates.txt");
    const auto templates = loadTemplates(tin);
    ASSERT_FALSE(templates.empty());
    std::ifstream kin(testsupport::dataDir() / "keywords_th.txt");
    const auto keywords = loadKeywords(kin);
    ASSERT_TRUE(keywords.count("id_terms"));

    // Bind every placeholder from a small pool; collect (template, binding) -> string.
    const std::vector<std::string> pool{R"("เลขประจำตัวประชาชน")", R"("number")", R"("1-1001-")", "site:go.th",
                                        "site:ac.th", R"("นาย")"};
    std::set<std::string> seen;
    std::size_t pairs = 0;
    for (std::size_t t = 0; t < templates.size(); ++t) {
        const auto names = templates[t].placeholders();
        std::vector<std::size_t> idx(names.size(), 0);
        while (true) {
            Binding b;
            for (std::size_t k = 0; k < names.size(); ++k)
                b[names[k]] = pool[idx[k]];
            const auto text = render(templates[t].bind(b));
            EXPECT_TRUE(referenceTokenizerAccepts(text)) << text;
            seen.insert(text);
            ++pairs;
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == pool.size())
                idx[k++] = 0;
            if (k == idx.size())
                break;
        }
    }
    EXPECT_EQ(seen.size(), pairs);
}

TEST(Files, BindingsAndPlanJson)
{
    std::istringstream bindings("prefix\tterm\n\"1-1001-\"\t\"number\"\n# comment\n\"3-2007-\"\t\"list\"\n");
    const auto b = loadBindings(bindings);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[1].at("prefix"), R"("3-2007-")");

    std::istringstream bad("a\tb\nonly-one\n");
    EXPECT_THROW(loadBindings(bad), QueryError);

    QueryPlan plan;
    plan.queries = {R"(filetype:pdf "1-1001-")", "a AND b"};
    plan.engines = {Engine::Bing, Engine::Google};
    plan.max_pages = 3;
    plan.tags = {"x"};
    EXPECT_EQ(planFromJson(planToJson(plan)), plan);

    testsupport::TempDir dir("plan");
    testsupport::writeFile(dir / "empty.txt", "\n  \n");
    EXPECT_THROW(loadPlanFile(dir / "empty.txt"), QueryError);
    testsupport::writeFile(dir / "lines.txt", "# c\nq1\n  q2\n");
    EXPECT_EQ(loadPlanFile(dir / "lines.txt").queries, (std::vector<std::string>{"q1", "q2"}));
    testsupport::writeFile(dir / "plan.json", planToJson(plan));
    EXPECT_EQ(loadPlanFile(dir / "plan.json"), plan);
}

TEST(Files, KeywordSections)
{
    std::istringstream in("[id_terms]\nเลขประจำตัวประชาชน # National ID number\n[name_prefixes]\nนาย # Mr.\nนาง\n");
    const auto k = loadKeywords(in);
    ASSERT_EQ(k.at("id_terms").size(), 1u);
    EXPECT_EQ(k.at("id_terms")[0].text, "เลขประจำตัวประชาชน");
    EXPECT_EQ(k.at("id_terms")[0].gloss, "National ID number");
    EXPECT_EQ(k.at("name_prefixes")[1].gloss, "");
    std::istringstream orphan("word\n");
    EXPECT_THROW(loadKeywords(orphan), QueryError);
}
