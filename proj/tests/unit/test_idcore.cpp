// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

#include "idexpose/idcore.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace idexpose;
using testsupport::registry;

namespace {

std::string randomDigits(std::mt19937_64& rng, std::size_t n)
{
    std::string s;
    for (std::size_t i = 0; i < n; ++i)
        s.push_back(static_cast<char>('0' + rng() % 10));
    return s;
}

std::string thai(std::string_view ascii)
{
    std::string out;
    for (char c : ascii) {
        if (c >= '0' && c <= '9')
            out += std::string{'\xE0', '\xB9', static_cast<char>(0x90 + (c - '0'))};
        else
            out.push_back(c);
    }
    return out;
}

}  // namespace

TEST(Numerals, MapsThaiDigits)
{
    EXPECT_EQ(normalize_numerals("๑๒๓"), "123");
    EXPECT_EQ(normalize_numerals("abc-123"), "abc-123");
    EXPECT_EQ(normalize_numerals("๐๙X๙๐"), "09X90");
    EXPECT_EQ(normalize_numerals("ก๕ข"), "ก5ข");
    EXPECT_EQ(normalize_numerals(""), "");
}

TEST(Checksum, WorkedExample)
{
    const auto trace = oracle::checksum("123456789101");
    EXPECT_EQ(trace.weighted_sum, 351);
    EXPECT_EQ(trace.remainder, 10);
    EXPECT_EQ(trace.check_digit, 1);
    EXPECT_EQ(compute_checksum("123456789101"), 1);
}

TEST(Checksum, AllZeros)
{
    EXPECT_EQ(compute_checksum("000000000000"), 1);
}

TEST(Checksum, FrozenOracleValue)
{
    // Frozen from the step-by-step oracle: sum 181, remainder 5, 11 - 5 = 6.
    const auto trace = oracle::checksum("110012345678");
    EXPECT_EQ(trace.weighted_sum, 181);
    EXPECT_EQ(trace.check_digit, 6);
    EXPECT_EQ(compute_checksum("110012345678"), 6);
}

TEST(Checksum, RejectsMalformedInput)
{
    EXPECT_THROW(compute_checksum("12345678910"), std::invalid_argument);
    EXPECT_THROW(compute_checksum("1234567891012"), std::invalid_argument);
    EXPECT_THROW(compute_checksum("12345678910a"), std::invalid_argument);
    EXPECT_THROW(compute_checksum(""), std::invalid_argument);
}

TEST(Checksum, AgreesWithOracleOnRandomPrefixes)
{
    std::mt19937_64 rng(20240301);
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto prefix = randomDigits(rng, 12);
        if (compute_checksum(prefix) != oracle::checksum(prefix).check_digit)
            ++mismatches;
    }
    EXPECT_EQ(mismatches, 0);
}

TEST(Checksum, SingleDigitPerturbationMechanism)
{
    // An altered digit goes unnoticed exactly when the weighted sum is
    // unchanged mod 11, or when the remainder moves between 0 and 10 (both
    // fold to check digit 1).
    std::mt19937_64 rng(77);
    int trials = 0, detected = 0, unchangedMod11 = 0, foldCollision = 0;
    for (int i = 0; i < 20000; ++i) {
        auto id = generate_valid_id("1" + std::string("1001"), randomDigits(rng, 7), registry());
        const auto before = oracle::checksum(id.substr(0, 12));
        const auto pos = static_cast<std::size_t>(rng() % 12);
        const char old = id[pos];
        char replacement;
        do {
            replacement = static_cast<char>('0' + rng() % 10);
        } while (replacement == old);
        id[pos] = replacement;
        const auto after = oracle::checksum(id.substr(0, 12));
        const bool caught = validate(id, registry()).failed_stage == ValidationStage::Checksum;
        ++trials;
        if (caught) {
            ++detected;
            continue;
        }
        if (after.remainder == before.remainder) {
            ++unchangedMod11;
            EXPECT_EQ(pos, 2u) << "only the weight-11 position can leave the remainder unchanged";
        } else {
            ++foldCollision;
            EXPECT_EQ(std::set<int>({before.remainder, after.remainder}), std::set<int>({0, 10}));
        }
    }
    EXPECT_EQ(trials, detected + unchangedMod11 + foldCollision);
    EXPECT_GT(unchangedMod11, 0);
    const double rate = static_cast<double>(detected) / trials;
    RecordProperty("detection_rate", std::to_string(rate));
    // Digit 3 alone caps the rate at 11/12; the fold costs about 2% more.
    EXPECT_LT(rate, 11.0 / 12.0);
    EXPECT_GT(rate, 0.88);
}

TEST(Candidates, GroupedForm)
{
    const auto c = find_candidates("id 1-1001-23456-78-9 end");
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].normalized, "1100123456789");
    EXPECT_EQ(c[0].raw_text, "1-1001-23456-78-9");
    EXPECT_EQ(c[0].source_span, (ByteSpan{3, 20}));
}

TEST(Candidates, EmbeddedRunIsNotACandidate)
{
    EXPECT_TRUE(find_candidates("x12345678910111y").empty());
    EXPECT_TRUE(find_candidates("12345678901234").empty());
    EXPECT_TRUE(find_candidates("123456789012").empty());
}

TEST(Candidates, ThaiAndArabic)
{
    const std::string text = "1234567891011 and ๑๒๓๔๕๖๗๘๙๑๐๑๑";
    const auto c = find_candidates(text);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].normalized, "1234567891011");
    EXPECT_EQ(c[1].normalized, "1234567891011");
    EXPECT_EQ(c[1].source_span.begin, 18u);
    EXPECT_EQ(c[1].source_span.end, text.size());
    EXPECT_EQ(c[1].raw_text, "๑๒๓๔๕๖๗๘๙๑๐๑๑");
}

TEST(Candidates, SeparatorPolicy)
{
    EXPECT_EQ(find_candidates("1 1001 23456 78 9").size(), 1u);
    EXPECT_EQ(find_candidates("1 1001-23456 78-9").size(), 1u);  // mixed separators accepted
    EXPECT_TRUE(find_candidates("1--1001-23456-78-9").empty());
    EXPECT_TRUE(find_candidates("11-001-23456-78-9").empty());
    EXPECT_TRUE(find_candidates("1.1001.23456.78.9").empty());
    EXPECT_TRUE(find_candidates("1-1001-23456-78-90").empty());
    EXPECT_TRUE(find_candidates("51-1001-23456-78-9").empty());
}

TEST(Candidates, ThaiGroupedForm)
{
    const auto c = find_candidates(thai("เลข 3-1001-00012-34-5 ครับ"));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].normalized, "3100100012345");
}

TEST(Candidates, SourceOrder)
{
    const auto c = find_candidates("b 2222222222222, a 1111111111111 c 3-3333-33333-33-3");
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].normalized, "2222222222222");
    EXPECT_EQ(c[1].normalized, "1111111111111");
    EXPECT_EQ(c[2].normalized, "3333333333333");
    EXPECT_LT(c[0].source_span.end, c[1].source_span.begin);
}

TEST(Candidates, AgreesWithRegexOracleOnRandomText)
{
    // Alphabet chosen to hit boundaries often: digits, separators, Thai
    // digits and letters, ASCII letters.
    const std::vector<std::string> alphabet{"0", "1", "2", "3", "4", "5", "6", "7", "8", "9",
                                            "-", " ", "๑", "๕", "๐", "ก", "x", "\n", "9", "1"};
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text;
        const auto len = 10 + rng() % 80;
        for (std::size_t i = 0; i < len; ++i)
            text += alphabet[rng() % alphabet.size()];
        // Sometimes splice in a well-formed candidate so matches are not rare.
        if (trial % 2 == 0) {
            const auto id = randomDigits(rng, 13);
            text.insert(0, (trial % 4 == 0 ? id : id.substr(0, 1) + "-" + id.substr(1, 4) + " " + id.substr(5, 5) + "-"
                                                   + id.substr(10, 2) + " " + id.substr(12)) + "x");
        }

        const auto got = find_candidates(text);
        const auto want = oracle::candidates(text);
        ASSERT_EQ(got.size(), want.size()) << text;
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].source_span.begin, want[i].begin) << text;
            EXPECT_EQ(got[i].source_span.end, want[i].end) << text;
            EXPECT_EQ(got[i].normalized, want[i].digits) << text;
        }
    }
}

TEST(Candidates, SoundnessRoundTrip)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const auto id = randomDigits(rng, 13);
        const std::string forms[] = {id, thai(id), id.substr(0, 1) + " " + id.substr(1, 4) + "-" + id.substr(5, 5) + " "
                                                       + id.substr(10, 2) + "-" + id.substr(12)};
        for (const auto& form : forms) {
            const std::string text = "ก " + form + " ข";
            for (const auto& c : find_candidates(text)) {
                ASSERT_EQ(c.normalized.size(), 13u);
                EXPECT_TRUE(isIdFormat(c.normalized));
                const auto reread = text.substr(c.source_span.begin, c.source_span.end - c.source_span.begin);
                EXPECT_EQ(reread, c.raw_text);
                std::string stripped;
                for (char ch : normalize_numerals(reread)) {
                    if (ch != '-' && ch != ' ')
                        stripped.push_back(ch);
                }
                EXPECT_EQ(stripped, c.normalized);
            }
        }
    }
}

TEST(Validate, StagesInOrder)
{
    const auto ok = validate(generate_valid_id("11001", "2345678", registry()), registry());
    EXPECT_TRUE(ok.accepted());
    EXPECT_EQ(ok.stage_results, (std::array<bool, 3>{true, true, true}));

    // District 2345 is not in the registry; the checksum is the worked example.
    ASSERT_FALSE(registry().lookupDistrict("2345"));
    const auto prefix = validate("1234567891011", registry());
    EXPECT_EQ(prefix.failed_stage, ValidationStage::Prefix);
    EXPECT_EQ(prefix.stage_results, (std::array<bool, 3>{true, true, false}));

    ASSERT_NE(compute_checksum("110012345678"), 0);
    EXPECT_EQ(validate("1100123456780", registry()).failed_stage, ValidationStage::Checksum);

    const auto format = validate("12345", registry());
    EXPECT_EQ(format.failed_stage, ValidationStage::Format);
    EXPECT_EQ(format.stage_results, (std::array<bool, 3>{false, false, false}));
    EXPECT_EQ(validate("12345678901a3", registry()).failed_stage, ValidationStage::Format);
}

TEST(Validate, CategoryBounds)
{
    for (char category : {'0', '9'}) {
        std::string prefix12 = std::string(1, category) + "1001" + "0000001";
        const auto id = prefix12 + static_cast<char>('0' + compute_checksum(prefix12));
        EXPECT_EQ(validate(id, registry()).failed_stage, ValidationStage::Prefix);
    }
}

TEST(Decode, NamesFromRegistry)
{
    const auto bkk = decode(generate_valid_id("11001", "0000000", registry()), registry());
    EXPECT_EQ(bkk.province_code, "10");
    EXPECT_EQ(bkk.province_name, "Bangkok");
    EXPECT_EQ(bkk.district_code, "1001");
    EXPECT_EQ(bkk.district_name, "Phra Nakhon");

    const auto sr = decode(generate_valid_id("32007", "1234567", registry()), registry());
    EXPECT_EQ(sr.province_code, "20");
    EXPECT_EQ(sr.district_name, "Si Racha");
    EXPECT_EQ(sr.category, 3);
    EXPECT_FALSE(categoryDescription(3).empty());

    EXPECT_THROW(decode("1234567891011", registry()), std::invalid_argument);
}

TEST(Generate, FrozenAndRejections)
{
    EXPECT_EQ(generate_valid_id("11001", "0000000", registry()),
              "110010000000" + std::to_string(oracle::checksum("110010000000").check_digit));
    ASSERT_FALSE(registry().lookupDistrict("3095"));
    EXPECT_THROW(generate_valid_id("93095", "1234567", registry()), std::invalid_argument);
    EXPECT_THROW(generate_valid_id("01001", "1234567", registry()), std::invalid_argument);
    EXPECT_THROW(generate_valid_id("1100", "1234567", registry()), std::invalid_argument);
    EXPECT_THROW(generate_valid_id("11001", "123456", registry()), std::invalid_argument);
}

TEST(Generate, DecodeRoundTrip)
{
    std::mt19937_64 rng(5);
    std::vector<std::string> districts;
    for (const auto& [code, d] : registry().districts())
        districts.push_back(code);
    for (int i = 0; i < 2000; ++i) {
        const int category = 1 + static_cast<int>(rng() % 8);
        const auto& district = districts[rng() % districts.size()];
        const auto seq = randomDigits(rng, 7);
        const auto id = generate_valid_id(std::to_string(category) + district, seq, registry());
        ASSERT_TRUE(validate(id, registry()).accepted());
        const auto n = decode(id, registry());
        EXPECT_EQ(n.category, category);
        EXPECT_EQ(n.district_code, district);
        EXPECT_EQ(n.sequence, seq);
        EXPECT_EQ(n.province_code, district.substr(0, 2));
        EXPECT_EQ(n.check_digit, compute_checksum(id.substr(0, 12)));
    }
}

TEST(Pseudonym, DeterministicAndSalted)
{
    const auto a1 = pseudonymize("1100100000018", "salt-a");
    const auto a2 = pseudonymize("1100100000018", "salt-a");
    const auto b = pseudonymize("1100100000018", "salt-b");
    const auto other = pseudonymize("1100100000026", "salt-a");
    EXPECT_EQ(a1, a2);
    EXPECT_NE(a1.token, b.token);
    EXPECT_NE(a1.salt_id, b.salt_id);
    EXPECT_NE(a1.token, other.token);
    EXPECT_EQ(a1.salt_id, other.salt_id);
    EXPECT_EQ(a1.token.size(), 64u);
    EXPECT_EQ(a1.salt_id.size(), 8u);
    EXPECT_EQ(a1.token.find_first_not_of("0123456789abcdef"), std::string::npos);
    EXPECT_THROW(pseudonymize("1100100000018", ""), std::invalid_argument);
    EXPECT_THROW(pseudonymize("110010000001", "s"), std::invalid_argument);
}

TEST(Pseudonym, KnownHmacVector)
{
    // HMAC-SHA256(key="key", msg="1100100000018"), computed with Python's hmac module.
    const auto t = pseudonymize("1100100000018", "key");
    EXPECT_EQ(t.token, "8fdaa5c7327df28b10f9e5e5dcdfa484a8d4e2e05aa7e57455ff04a20a70864e");
    EXPECT_EQ(t.salt_id, "2c70e12b");  // first 8 hex of sha256("key")
}

TEST(Concurrency, PureFunctionsFromManyThreads)
{
    std::vector<std::thread> threads;
    std::atomic<int> failures{0};
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([t, &failures] {
            std::mt19937_64 rng(static_cast<std::uint64_t>(t));
            for (int i = 0; i < 500; ++i) {
                const auto id = generate_valid_id("11001", randomDigits(rng, 7), registry());
                if (!validate(id, registry()).accepted() || find_candidates("a " + id + " b").size() != 1)
                    ++failures;
            }
        });
    }
    for (auto& th : threads)
        th.join();
    EXPECT_EQ(failures.load(), 0);
}
