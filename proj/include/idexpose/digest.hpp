// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <string_view>

namespace idexpose {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256Hex(std::string_view bytes);

/// Lowercase hex HMAC-SHA256.
std::string hmacSha256Hex(std::string_view key, std::string_view message);

std::string toHex(std::string_view bytes);

}  // namespace idexpose
