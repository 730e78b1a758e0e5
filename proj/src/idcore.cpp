// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/idcore.hpp"

#include <algorithm>

#include "idexpose/digest.hpp"

namespace idexpose {

namespace {

// Thai digits U+0E50..U+0E59 encode as E0 B9 90..99.
constexpr unsigned char kThaiLead0 = 0xE0;
constexpr unsigned char kThaiLead1 = 0xB9;
constexpr unsigned char kThaiDigitZero = 0x90;

bool isThaiDigitAt(std::string_view s, std::size_t i)
{
    return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == kThaiLead0
        && static_cast<unsigned char>(s[i + 1]) == kThaiLead1
        && static_cast<unsigned char>(s[i + 2]) >= kThaiDigitZero
        && static_cast<unsigned char>(s[i + 2]) <= kThaiDigitZero + 9;
}

bool isAsciiDigit(char c) { return c >= '0' && c <= '9'; }

// One source character after numeral mapping, with its byte extent.
struct Unit {
    char mapped;  // '0'..'9', '-', ' ', or '\0' for anything else
    std::size_t begin;
    std::size_t end;
};

std::vector<Unit> toUnits(std::string_view text)
{
    std::vector<Unit> units;
    units.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (isThaiDigitAt(text, i)) {
            char d = static_cast<char>('0' + (static_cast<unsigned char>(text[i + 2]) - kThaiDigitZero));
            units.push_back({d, i, i + 3});
            i += 3;
            continue;
        }
        const char c = text[i];
        if (isAsciiDigit(c) || c == '-' || c == ' ') {
            units.push_back({c, i, i + 1});
        } else {
            units.push_back({'\0', i, i + 1});
        }
        ++i;
    }
    return units;
}

bool unitIsDigit(const std::vector<Unit>& u, std::size_t k) { return k < u.size() && isAsciiDigit(u[k].mapped); }

// Card grouping 1-4-5-2-1 starting at `start`; returns one-past-end unit index on match.
std::optional<std::size_t> matchGrouped(const std::vector<Unit>& u, std::size_t start)
{
    static constexpr std::array<std::size_t, 5> kGroups{1, 4, 5, 2, 1};
    std::size_t k = start;
    for (std::size_t g = 0; g < kGroups.size(); ++g) {
        for (std::size_t n = 0; n < kGroups[g]; ++n, ++k) {
            if (!unitIsDigit(u, k))
                return std::nullopt;
        }
        if (unitIsDigit(u, k))
            return std::nullopt;
        if (g + 1 < kGroups.size()) {
            if (k >= u.size() || (u[k].mapped != '-' && u[k].mapped != ' '))
                return std::nullopt;
            ++k;
        }
    }
    return k;
}

RawCandidate makeCandidate(std::string_view text, const std::vector<Unit>& u, std::size_t first, std::size_t last)
{
    RawCandidate c;
    c.source_span = {u[first].begin, u[last - 1].end};
    c.raw_text = std::string(text.substr(c.source_span.begin, c.source_span.end - c.source_span.begin));
    for (std::size_t k = first; k < last; ++k) {
        if (isAsciiDigit(u[k].mapped))
            c.normalized.push_back(u[k].mapped);
    }
    return c;
}

constexpr std::array<std::string_view, 9> kCategories{
    "",
    "Thai national, born 1984 or later, birth registered on time",
    "Thai national, born 1984 or later, birth registered late",
    "Registered in a household before mid-1984",
    "Moved into a household before receiving a first number",
    "Added later after an omission or special case",
    "Temporary or undocumented resident, or awaiting status",
    "Born in Thailand to a category 6 parent",
    "Foreign resident or naturalized after mid-1984",
};

bool prefixPasses(std::string_view digits, const GeoRegistry& registry)
{
    const int category = digits[0] - '0';
    return category >= 1 && category <= 8 && registry.lookupDistrict(digits.substr(1, 4)).has_value();
}

}  // namespace

std::string_view stageName(ValidationStage stage)
{
    switch (stage) {
    case ValidationStage::Format:
        return "format";
    case ValidationStage::Checksum:
        return "checksum";
    case ValidationStage::Prefix:
        return "prefix";
    }
    return "unknown";
}

std::string normalize_numerals(std::string_view utf8)
{
    std::string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) {
        if (isThaiDigitAt(utf8, i)) {
            out.push_back(static_cast<char>('0' + (static_cast<unsigned char>(utf8[i + 2]) - kThaiDigitZero)));
            i += 3;
        } else {
            out.push_back(utf8[i++]);
        }
    }
    return out;
}

std::vector<RawCandidate> find_candidates(std::string_view text)
{
    const auto units = toUnits(text);
    std::vector<RawCandidate> out;

    std::size_t i = 0;
    while (i < units.size()) {
        if (!unitIsDigit(units, i)) {
            ++i;
            continue;
        }
        // i starts a maximal digit run: the previous unit is never a digit here.
        std::size_t runEnd = i;
        while (unitIsDigit(units, runEnd))
            ++runEnd;
        const std::size_t runLength = runEnd - i;

        if (runLength == kIdLength) {
            out.push_back(makeCandidate(text, units, i, runEnd));
            i = runEnd;
            continue;
        }
        if (runLength == 1) {
            if (auto end = matchGrouped(units, i)) {
                out.push_back(makeCandidate(text, units, i, *end));
                i = *end;
                continue;
            }
        }
        i = runEnd;
    }
    return out;
}

bool isIdFormat(std::string_view s)
{
    return s.size() == kIdLength && std::all_of(s.begin(), s.end(), isAsciiDigit);
}

int compute_checksum(std::string_view prefix12)
{
    if (prefix12.size() != kIdLength - 1 || !std::all_of(prefix12.begin(), prefix12.end(), isAsciiDigit))
        throw std::invalid_argument("checksum input must be exactly 12 digits");
    int sum = 0;
    for (std::size_t i = 0; i < prefix12.size(); ++i)
        sum += (prefix12[i] - '0') * static_cast<int>(13 - i);
    return (11 - sum % 11) % 10;
}

ValidationOutcome validate(std::string_view candidate, const GeoRegistry& registry)
{
    ValidationOutcome outcome;
    if (!isIdFormat(candidate)) {
        outcome.failed_stage = ValidationStage::Format;
        return outcome;
    }
    outcome.stage_results[0] = true;

    if (compute_checksum(candidate.substr(0, 12)) != candidate[12] - '0') {
        outcome.failed_stage = ValidationStage::Checksum;
        return outcome;
    }
    outcome.stage_results[1] = true;

    if (!prefixPasses(candidate, registry)) {
        outcome.failed_stage = ValidationStage::Prefix;
        return outcome;
    }
    outcome.stage_results[2] = true;
    return outcome;
}

NationalId decode(std::string_view id, const GeoRegistry& registry)
{
    const auto outcome = validate(id, registry);
    if (!outcome.accepted())
        throw std::invalid_argument("cannot decode '" + std::string(id) + "': rejected at "
                                    + std::string(stageName(*outcome.failed_stage)) + " stage");
    const auto district = registry.lookupDistrict(id.substr(1, 4));
    const auto province = registry.lookupProvince(id.substr(1, 2));

    NationalId out;
    out.digits = std::string(id);
    out.category = id[0] - '0';
    out.province_code = std::string(id.substr(1, 2));
    out.province_name = province ? province->name : std::string();
    out.district_code = std::string(id.substr(1, 4));
    out.district_name = district->name;
    out.sequence = std::string(id.substr(5, 7));
    out.check_digit = id[12] - '0';
    return out;
}

std::string generate_valid_id(std::string_view prefix5, std::string_view sequence7, const GeoRegistry& registry)
{
    if (prefix5.size() != 5 || !std::all_of(prefix5.begin(), prefix5.end(), isAsciiDigit))
        throw std::invalid_argument("prefix must be exactly 5 digits");
    if (sequence7.size() != 7 || !std::all_of(sequence7.begin(), sequence7.end(), isAsciiDigit))
        throw std::invalid_argument("sequence must be exactly 7 digits");
    const int category = prefix5[0] - '0';
    if (category < 1 || category > 8)
        throw std::invalid_argument("category digit must be 1..8, got " + std::to_string(category));
    if (!registry.lookupDistrict(prefix5.substr(1, 4)))
        throw std::invalid_argument("district " + std::string(prefix5.substr(1, 4)) + " is not in the registry");

    std::string id;
    id.reserve(kIdLength);
    id.append(prefix5).append(sequence7);
    id.push_back(static_cast<char>('0' + compute_checksum(id)));
    return id;
}

PseudonymToken pseudonymize(std::string_view id, std::string_view salt)
{
    if (salt.empty())
        throw std::invalid_argument("pseudonymization salt must not be empty");
    if (!isIdFormat(id))
        throw std::invalid_argument("pseudonymize expects a 13-digit id");
    return {hmacSha256Hex(salt, id), saltId(salt)};
}

std::string saltId(std::string_view salt)
{
    return sha256Hex(salt).substr(0, 8);
}

std::string_view categoryDescription(int category)
{
    if (category < 1 || category > 8)
        return {};
    return kCategories[static_cast<std::size_t>(category)];
}

}  // namespace idexpose
