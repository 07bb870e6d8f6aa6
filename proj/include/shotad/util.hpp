// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shotad {

// FNV-1a, used for cache keys and prompt provenance hashes. Not
// collision-resistant against adversaries; inputs here are our own artifacts.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::string_view data,
                              std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t v);

// Deterministic bounded draw. std::uniform_int_distribution is
// implementation-defined, which would break frozen goldens across stdlibs.
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound);

// Sample k items without replacement. When k >= pool size the pool is
// returned in its original order.
std::vector<std::string> sample_without_replacement(
    const std::vector<std::string>& pool, std::size_t k, std::uint64_t seed);

std::string read_text_file(const std::filesystem::path& path);

// Write via temp file + rename so readers never observe partial content.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

std::string lowercase(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
bool contains_word(std::string_view haystack, std::string_view word);

std::string join(std::span<const std::string> parts, std::string_view sep);

// RFC 4648 base64 with padding; used by the remote video backend contract.
std::string base64_encode(std::string_view data);

}  // namespace shotad
