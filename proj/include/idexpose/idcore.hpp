// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idexpose/georegistry.hpp"

namespace idexpose {

inline constexpr std::size_t kIdLength = 13;

/// Half-open byte range into the original (un-normalized) UTF-8 text.
struct ByteSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const ByteSpan&) const = default;
};

/// A 13-digit number found in text, before checksum or registry checks.
struct RawCandidate {
    ByteSpan source_span;
    std::string raw_text;    // exactly the bytes at source_span
    std::string normalized;  // 13 ASCII digits
};

enum class ValidationStage { Format = 0, Checksum = 1, Prefix = 2 };

std::string_view stageName(ValidationStage stage);

struct ValidationOutcome {
    std::array<bool, 3> stage_results{false, false, false};
    std::optional<ValidationStage> failed_stage;  // first failing stage, empty when accepted

    bool accepted() const { return !failed_stage.has_value(); }
};

struct NationalId {
    std::string digits;
    int category = 0;
    std::string province_code;
    std::string province_name;
    std::string district_code;
    std::string district_name;
    std::string sequence;
    int check_digit = 0;
};

struct PseudonymToken {
    std::string token;    // 64 lowercase hex characters
    std::string salt_id;  // 8 hex characters naming the salt, not revealing it

    bool operator==(const PseudonymToken&) const = default;
};

/// Maps Thai digits U+0E50..U+0E59 to '0'..'9'; everything else is copied through.
std::string normalize_numerals(std::string_view utf8);

/// All non-overlapping ID-shaped numbers in `text`, in source order.
///
/// Two shapes are recognized, both after Thai-numeral mapping:
///   - 13 contiguous digits with no digit immediately before or after;
///   - the card grouping D-DDDD-DDDDD-DD-D, where each separator is a single
///     hyphen or space (separators may be mixed).
std::vector<RawCandidate> find_candidates(std::string_view text);

/// Check digit for a 12-digit prefix. Throws std::invalid_argument on bad input.
int compute_checksum(std::string_view prefix12);

/// True when `s` is exactly 13 ASCII digits.
bool isIdFormat(std::string_view s);

ValidationOutcome validate(std::string_view candidate, const GeoRegistry& registry);

/// Throws std::invalid_argument unless validate() accepts `id`.
NationalId decode(std::string_view id, const GeoRegistry& registry);

/// prefix5 || sequence7 || check digit. Throws std::invalid_argument when the
/// category digit is outside 1..8, the district is not registered, or the
/// sequence is not 7 digits.
std::string generate_valid_id(std::string_view prefix5, std::string_view sequence7, const GeoRegistry& registry);

/// HMAC-SHA256(key = salt, message = id), hex encoded. Empty salt is rejected.
PseudonymToken pseudonymize(std::string_view id, std::string_view salt);

/// First 8 hex digits of SHA-256(salt); identifies the salt without revealing it.
std::string saltId(std::string_view salt);

/// Registrant category text for a first digit 1..8; empty view otherwise.
std::string_view categoryDescription(int category);

}  // namespace idexpose
