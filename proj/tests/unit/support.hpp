// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "idexpose/georegistry.hpp"

#ifndef IDEXPOSE_DATA_DIR
#error "IDEXPOSE_DATA_DIR must point at the data directory"
#endif

namespace testsupport {

inline std::filesystem::path dataDir() { return IDEXPOSE_DATA_DIR; }

inline const idexpose::GeoRegistry& registry()
{
    static const auto kRegistry = idexpose::GeoRegistry::loadFile(dataDir() / "registry.csv");
    return kRegistry;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "t")
    {
        static std::mt19937_64 rng(std::random_device{}());
        mPath = std::filesystem::temp_directory_path() / ("idexpose-" + tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(mPath);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(mPath, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return mPath; }
    std::filesystem::path operator/(const std::string& name) const { return mPath / name; }

private:
    std::filesystem::path mPath;
};

inline std::string readFile(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void writeFile(const std::filesystem::path& p, const std::string& bytes)
{
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << bytes;
}

}  // namespace testsupport
