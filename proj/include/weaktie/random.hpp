#pragma once

#include <cstdint>
#include <random>

namespace weaktie {

/// What a derived random stream is used for. Each purpose gets its own
/// stream, so adding a consumer never shifts the numbers another one sees.
enum class StreamTag : std::uint64_t { Split = 1, Tie = 2, Auc = 3 };

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Child seed for run `run` and purpose `tag` of an experiment keyed by
/// `master`. Counter-based: depends only on the three inputs.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, StreamTag tag) noexcept {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ run);
  return detail::splitmix64(h ^ static_cast<std::uint64_t>(tag));
}

using Rng = std::mt19937_64;

/**
 * Number of marked items obtained when drawing `draws` items without
 * replacement from a pool of `pool` items of which `marked` are marked.
 * Draws one item at a time, so the cost is O(draws).
 */
inline std::uint64_t draw_marked(std::uint64_t pool, std::uint64_t marked, std::uint64_t draws, Rng& rng) {
  std::uint64_t hits = 0;
  for (std::uint64_t d = 0; d < draws && pool > 0 && marked > 0; ++d, --pool) {
    if (std::uniform_int_distribution<std::uint64_t>(0, pool - 1)(rng) < marked) {
      ++hits;
      --marked;
    }
  }
  return hits;
}

}  // namespace weaktie
