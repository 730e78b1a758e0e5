// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idexpose/clock.hpp"

namespace idexpose {

struct ExtractorSpec {
    enum class Kind { Plain, Csv, Html, External };

    std::string name;
    Kind kind = Kind::Plain;
    std::string command;  // External only; must contain {input}
    std::set<std::string> applicable_types;
    Millis timeout{60000};

    static ExtractorSpec builtin(Kind kind, std::string name, std::set<std::string> types);
    static ExtractorSpec external(std::string name, std::string command, std::set<std::string> types,
                                  Millis timeout = Millis(60000));

    /// Throws std::invalid_argument when the invariants do not hold.
    void check() const;
};

struct TextSegment {
    std::string extractor;
    std::string text;
    bool invalid_utf8 = false;  // output contained invalid UTF-8, replaced with U+FFFD
};

struct ExtractorFailure {
    std::string extractor;
    std::string reason;
};

struct ExtractedText {
    std::string object_digest;
    std::vector<TextSegment> segments;
    std::vector<ExtractorFailure> failures;
    std::string merged;  // distinct non-empty lines in first-seen order, '\n' separated
};

class ExtractionError : public std::runtime_error {
public:
    ExtractionError(const std::string& what, std::vector<ExtractorFailure> failures = {});
    const std::vector<ExtractorFailure>& failures() const { return mFailures; }

private:
    std::vector<ExtractorFailure> mFailures;
};

class UnsupportedTypeError : public ExtractionError {
public:
    using ExtractionError::ExtractionError;
};

/// Runs every extractor whose applicable_types contains `declared_type`, in
/// list order. Individual failures are kept in `failures`; only when all of
/// them fail is ExtractionError thrown.
ExtractedText extract_text(std::string_view bytes,
                           std::string_view declared_type,
                           const std::vector<ExtractorSpec>& extractors,
                           std::string object_digest = {});

struct ExternalOutput {
    std::string text;
    bool invalid_utf8 = false;
};

/// Launches the command with {input} replaced by `input`, without a shell.
/// Standard output is the extracted text. Throws ExtractionError on spawn
/// failure, nonzero exit (stderr attached) or timeout.
ExternalOutput run_external(const ExtractorSpec& spec, const std::filesystem::path& input);

/// Line-level union, first-seen order.
std::string mergeLines(const std::vector<TextSegment>& segments);

/// Builtins for txt, csv and html.
std::vector<ExtractorSpec> defaultExtractors();

/// JSON array of {"name", "kind": "plain"|"csv"|"html"|"external",
/// "command", "types": [...], "timeout_ms"}.
std::vector<ExtractorSpec> parseExtractorConfig(std::string_view json);
std::vector<ExtractorSpec> loadExtractorConfig(const std::filesystem::path& path);

// Builtin text walkers, exposed for tests.
std::string extractPlain(std::string_view bytes);
std::string extractCsv(std::string_view bytes);
std::string extractHtml(std::string_view bytes);

bool isValidUtf8(std::string_view s);

/// Decodes bytes that are not valid UTF-8 as TIS-620 (the legacy Thai
/// single-byte encoding); valid UTF-8 is returned unchanged.
std::string toUtf8(std::string_view bytes, bool* wasLegacy = nullptr);

/// Replaces each invalid UTF-8 sequence with U+FFFD.
std::string sanitizeUtf8(std::string_view bytes, bool* replaced = nullptr);

}  // namespace idexpose
