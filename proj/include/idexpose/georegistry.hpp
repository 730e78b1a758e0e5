// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace idexpose {

struct Province {
    std::string code;  // 2 digits
    std::string name;

    bool operator==(const Province&) const = default;
};

struct District {
    std::string code;  // 4 digits, first two equal province_code
    std::string name;
    std::string province_code;

    bool operator==(const District&) const = default;
};

struct PopulationTable {
    std::map<std::string, std::uint64_t> entries;  // province or district code -> persons
    std::string as_of;

    bool operator==(const PopulationTable&) const = default;
};

/// Load failure. `row()` is the 1-based line number of the offending record,
/// or 0 when the failure concerns the source as a whole.
class RegistryError : public std::runtime_error {
public:
    RegistryError(std::size_t row, const std::string& what);
    std::size_t row() const noexcept { return mRow; }

private:
    std::size_t mRow;
};

/// Province and district code tables plus optional population counts.
///
/// Text format, one record per line, comma separated, no quoting:
///
///     # comment
///     P,<2-digit code>,<name>
///     D,<4-digit code>,<name>
///     POP,<code>,<count>
///     ASOF,<label>
///
/// Records may appear in any order; referential integrity is checked after
/// the whole source has been read. Duplicate codes are an error.
class GeoRegistry {
public:
    static GeoRegistry load(std::istream& source);
    static GeoRegistry load(std::string_view text);
    static GeoRegistry loadFile(const std::filesystem::path& path);

    std::optional<District> lookupDistrict(std::string_view code4) const;
    std::optional<Province> lookupProvince(std::string_view code2) const;
    std::optional<std::uint64_t> populationOf(std::string_view code) const;

    const std::map<std::string, Province, std::less<>>& provinces() const { return mProvinces; }
    const std::map<std::string, District, std::less<>>& districts() const { return mDistricts; }
    const std::optional<PopulationTable>& population() const { return mPopulation; }

    /// Writes the canonical form: provinces, then districts, then population,
    /// each sorted by code. Reloading the output yields an equal registry.
    void serialize(std::ostream& out) const;
    std::string serialize() const;

    bool operator==(const GeoRegistry&) const = default;

private:
    std::map<std::string, Province, std::less<>> mProvinces;
    std::map<std::string, District, std::less<>> mDistricts;
    std::optional<PopulationTable> mPopulation;
};

}  // namespace idexpose
