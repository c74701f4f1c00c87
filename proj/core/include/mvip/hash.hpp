#pragma once

#include <cstdint>
#include <string_view>
#include <string>

namespace mvip {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
/// 16 lowercase hex digits.
std::string hex_digest(std::uint64_t h);

}  // namespace mvip
