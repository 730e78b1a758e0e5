// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/georegistry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace idexpose {

namespace {

bool allDigits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string_view> splitFields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

struct PendingPopulation {
    std::size_t row;
    std::string code;
    std::uint64_t count;
};

}  // namespace

RegistryError::RegistryError(std::size_t row, const std::string& what)
    : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what)
    , mRow(row)
{
}

GeoRegistry GeoRegistry::load(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return load(in);
}

GeoRegistry GeoRegistry::loadFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RegistryError(0, "cannot open registry file " + path.string());
    return load(in);
}

GeoRegistry GeoRegistry::load(std::istream& source)
{
    GeoRegistry reg;
    std::map<std::string, std::size_t> districtRows;
    std::vector<PendingPopulation> pops;
    std::optional<std::string> asOf;

    std::string line;
    std::size_t row = 0;
    while (std::getline(source, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#')
            continue;

        auto fields = splitFields(line);
        const auto kind = fields.front();
        if (kind == "ASOF") {
            if (fields.size() != 2)
                throw RegistryError(row, "ASOF record needs 2 columns, got " + std::to_string(fields.size()));
            asOf = std::string(fields[1]);
            continue;
        }
        if (fields.size() != 3)
            throw RegistryError(row, "expected 3 columns, got " + std::to_string(fields.size()));
        const auto code = fields[1];
        const auto value = fields[2];

        if (kind == "P") {
            if (code.size() != 2 || !allDigits(code))
                throw RegistryError(row, "province code must be 2 digits: '" + std::string(code) + "'");
            if (value.empty())
                throw RegistryError(row, "province name is empty");
            if (reg.mProvinces.count(code))
                throw RegistryError(row, "duplicate province code " + std::string(code));
            reg.mProvinces.emplace(std::string(code), Province{std::string(code), std::string(value)});
        } else if (kind == "D") {
            if (code.size() != 4 || !allDigits(code))
                throw RegistryError(row, "district code must be 4 digits: '" + std::string(code) + "'");
            if (value.empty())
                throw RegistryError(row, "district name is empty");
            if (reg.mDistricts.count(code))
                throw RegistryError(row, "duplicate district code " + std::string(code));
            reg.mDistricts.emplace(std::string(code),
                                   District{std::string(code), std::string(value), std::string(code.substr(0, 2))});
            districtRows.emplace(std::string(code), row);
        } else if (kind == "POP") {
            if (!(code.size() == 2 || code.size() == 4) || !allDigits(code))
                throw RegistryError(row, "population code must be 2 or 4 digits: '" + std::string(code) + "'");
            std::uint64_t count = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), count);
            if (!allDigits(value) || ec != std::errc{} || ptr != value.data() + value.size())
                throw RegistryError(row, "population count must be a nonnegative integer: '" + std::string(value) + "'");
            pops.push_back({row, std::string(code), count});
        } else {
            throw RegistryError(row, "unknown record kind '" + std::string(kind) + "'");
        }
    }

    if (reg.mProvinces.empty())
        throw RegistryError(0, "registry has no provinces");

    for (const auto& [code, district] : reg.mDistricts) {
        if (!reg.mProvinces.count(district.province_code))
            throw RegistryError(districtRows.at(code),
                                "district " + code + " references missing province " + district.province_code);
    }

    if (!pops.empty() || asOf) {
        PopulationTable table;
        table.as_of = asOf.value_or("");
        for (const auto& p : pops) {
            const bool known = p.code.size() == 2 ? reg.mProvinces.count(p.code) > 0 : reg.mDistricts.count(p.code) > 0;
            if (!known)
                throw RegistryError(p.row, "population for unknown code " + p.code);
            if (!table.entries.emplace(p.code, p.count).second)
                throw RegistryError(p.row, "duplicate population entry for " + p.code);
        }
        reg.mPopulation = std::move(table);
    }
    return reg;
}

std::optional<District> GeoRegistry::lookupDistrict(std::string_view code4) const
{
    auto it = mDistricts.find(code4);
    if (it == mDistricts.end())
        return std::nullopt;
    return it->second;
}

std::optional<Province> GeoRegistry::lookupProvince(std::string_view code2) const
{
    auto it = mProvinces.find(code2);
    if (it == mProvinces.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::uint64_t> GeoRegistry::populationOf(std::string_view code) const
{
    if (!mPopulation)
        return std::nullopt;
    auto it = mPopulation->entries.find(std::string(code));
    if (it == mPopulation->entries.end())
        return std::nullopt;
    return it->second;
}

void GeoRegistry::serialize(std::ostream& out) const
{
    for (const auto& [code, p] : mProvinces)
        out << "P," << code << ',' << p.name << '\n';
    for (const auto& [code, d] : mDistricts)
        out << "D," << code << ',' << d.name << '\n';
    if (mPopulation) {
        out << "ASOF," << mPopulation->as_of << '\n';
        for (const auto& [code, n] : mPopulation->entries)
            out << "POP," << code << ',' << n << '\n';
    }
}

std::string GeoRegistry::serialize() const
{
    std::ostringstream out;
    serialize(out);
    return out.str();
}

}  // namespace idexpose
