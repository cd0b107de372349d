#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace dyps {

using Rng = std::mt19937_64;

/// Engine for an independent stream identified by (seed, path...).
///
/// The key is fed to std::seed_seq as 32-bit words, low word first, so the
/// mapping is fully specified and stable across platforms.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {})
{
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto p : path)
        push(p);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

/// Derived 64-bit seed: first output of make_rng(seed, path).
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
    return make_rng(seed, path)();
}

}  // namespace dyps
