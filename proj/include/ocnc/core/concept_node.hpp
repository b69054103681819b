#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocnc/core/error.hpp"

namespace ocnc {

// The six conceptual nodes. The numeric value is the global slot index shared by
// count vectors and feature vectors; the order is also lexicographic by name.
enum class ConceptNode : std::size_t {
  celebrity = 0,
  identity = 1,
  news = 2,
  organization = 3,
  politics = 4,
  religion = 5,
};

inline constexpr std::size_t kNodeCount = 6;

inline constexpr std::array<ConceptNode, kNodeCount> kAllNodes = {
    ConceptNode::celebrity, ConceptNode::identity, ConceptNode::news,
    ConceptNode::organization, ConceptNode::politics, ConceptNode::religion};

constexpr std::size_t index_of(ConceptNode n) noexcept { return static_cast<std::size_t>(n); }

constexpr std::string_view name_of(ConceptNode n) noexcept {
  constexpr std::array<std::string_view, kNodeCount> names = {
      "celebrity", "identity", "news", "organization", "politics", "religion"};
  return names[index_of(n)];
}

inline std::optional<ConceptNode> node_from_name(std::string_view name) noexcept {
  for (ConceptNode n : kAllNodes)
    if (name_of(n) == name) return n;
  return std::nullopt;
}

inline ConceptNode parse_node(std::string_view name) {
  if (auto n = node_from_name(name)) return *n;
  throw FormatError("unknown conceptual node '" + std::string(name) + "'");
}

inline std::vector<ConceptNode> all_nodes() { return {kAllNodes.begin(), kAllNodes.end()}; }

}  // namespace ocnc
