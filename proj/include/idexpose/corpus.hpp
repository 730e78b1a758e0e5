// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idexpose/georegistry.hpp"
#include "idexpose/querygen.hpp"

namespace idexpose {

/// Parameters for a synthetic fixture corpus with known ground truth.
struct CorpusSpec {
    std::uint64_t seed = 1;
    std::size_t planted = 40;
    std::size_t decoys = 10;
    std::size_t documents = 12;
    std::size_t queries = 3;
    /// Cycled across documents. "pdf" documents are stub-encoded and need
    /// the external stub extractor.
    std::vector<std::string> formats{"txt", "csv", "html"};
    /// Every n-th planted ID also appears in a second document (0 disables).
    std::size_t repeat_every = 0;
    /// Writes one extra txt document in TIS-620 with Thai-numeral IDs.
    bool legacy_encoding_document = false;
    /// Command line for the stub extractor, e.g. "/usr/bin/idexpose-stub-extract {input}".
    /// When set, an extractors.json covering every format is written.
    std::string stub_command;
};

struct GeneratedCorpus {
    std::filesystem::path dir;
    std::filesystem::path index_path;  // fixture corpus index
    std::filesystem::path plan_path;
    std::filesystem::path extractors_path;  // empty unless stub_command was set
    QueryPlan plan;
    std::set<std::string> planted;
    std::vector<std::string> decoys;  // as written
    std::map<std::string, std::set<std::string>> urls_per_id;
    std::size_t document_count = 0;
};

/// Writes the corpus under `outDir` (created if needed): index.json,
/// plan.json, truth.json and docs/. Same spec and registry, same bytes.
GeneratedCorpus generate_corpus(const CorpusSpec& spec, const GeoRegistry& registry,
                                const std::filesystem::path& outDir);

/// Stub document format: a "STUBDOC" line followed by hex-encoded text lines.
std::string encodeStubDocument(std::string_view text);
/// Throws std::invalid_argument on bytes that are not a stub document.
std::string decodeStubDocument(std::string_view bytes);

/// UTF-8 restricted to ASCII and the Thai block, encoded as TIS-620.
/// Throws std::invalid_argument on other characters.
std::string encodeTis620(std::string_view utf8);

}  // namespace idexpose
