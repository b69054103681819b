#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ocnc/core/error.hpp"

namespace ocnc {

/// Non-negative integer count per conceptual node: the decision variable of the
/// allocation problem and the node-count part of every feature vector.
class Combination {
 public:
  using value_type = std::uint32_t;

  Combination() = default;
  explicit Combination(std::size_t dimension) : counts_(dimension, 0) {}
  Combination(std::initializer_list<value_type> counts) : counts_(counts) {}
  explicit Combination(std::vector<value_type> counts) : counts_(std::move(counts)) {}

  std::size_t size() const noexcept { return counts_.size(); }
  value_type operator[](std::size_t i) const { return counts_[i]; }
  value_type& operator[](std::size_t i) { return counts_[i]; }

  auto begin() const noexcept { return counts_.begin(); }
  auto end() const noexcept { return counts_.end(); }
  std::span<const value_type> counts() const noexcept { return counts_; }

  std::uint64_t total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  // Lexicographic; this is the tie-break order used by the exhaustive solver.
  friend auto operator<=>(const Combination&, const Combination&) = default;
  friend bool operator==(const Combination&, const Combination&) = default;

  std::string to_string(char sep = ' ') const {
    std::string out;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (i) out += sep;
      out += std::to_string(counts_[i]);
    }
    return out;
  }

 private:
  std::vector<value_type> counts_;
};

struct CombinationHash {
  std::size_t operator()(const Combination& c) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : c) {
      h ^= v;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// The i-th child increments slot i; children are returned in slot order.
inline std::vector<Combination> children(const Combination& c) {
  std::vector<Combination> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.push_back(c);
    ++out.back()[i];
  }
  return out;
}

}  // namespace ocnc
