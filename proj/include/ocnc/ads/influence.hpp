#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ocnc/ads/advertisement.hpp"
#include "ocnc/core/combination.hpp"
#include "ocnc/core/concept_node.hpp"
#include "ocnc/core/error.hpp"

namespace ocnc::ads {

struct InfluenceReport {
  std::vector<ConceptNode> nodes;  // slot order of `mean_allocation`
  std::vector<double> mean_allocation;
  std::size_t eligible = 0;     // ads with spend > 0
  std::size_t decile_size = 0;  // ceil(0.1 * eligible)
  std::vector<std::string> selected_ids;

  // (node, mean) pairs by decreasing mean; equal means keep slot order.
  std::vector<std::pair<ConceptNode, double>> ranked() const {
    std::vector<std::pair<ConceptNode, double>> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) out.emplace_back(nodes[i], mean_allocation[i]);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }
};

/// Mean node counts over the top decile of ads by clicks per ruble.
///
/// Ads with zero spend are dropped; the rest are ordered by clicks/spend
/// descending with ties broken by ascending id, and the first ceil(0.1 * m) are
/// kept. There is no tie expansion at the boundary.
inline InfluenceReport influence_analysis(std::span<const Advertisement> ads,
                                          std::span<const Combination> counts,
                                          std::vector<ConceptNode> nodes = all_nodes()) {
  if (ads.size() != counts.size())
    throw InvalidArgument("influence_analysis: one count vector per ad required");
  for (const auto& c : counts)
    if (c.size() != nodes.size()) throw DimensionMismatchError(nodes.size(), c.size());

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < ads.size(); ++i)
    if (ads[i].spend > 0.0) eligible.push_back(i);
  if (eligible.empty()) throw EmptyReportError("no advertisement with spend > 0");

  std::vector<double> cpr(ads.size(), 0.0);
  for (auto i : eligible) cpr[i] = static_cast<double>(ads[i].clicks) / ads[i].spend;
  std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
    if (cpr[a] != cpr[b]) return cpr[a] > cpr[b];
    return ads[a].id < ads[b].id;
  });

  InfluenceReport report;
  report.nodes = std::move(nodes);
  report.eligible = eligible.size();
  report.decile_size = (eligible.size() + 9) / 10;
  report.mean_allocation.assign(report.nodes.size(), 0.0);
  for (std::size_t r = 0; r < report.decile_size; ++r) {
    const auto i = eligible[r];
    report.selected_ids.push_back(ads[i].id);
    for (std::size_t n = 0; n < report.nodes.size(); ++n) report.mean_allocation[n] += counts[i][n];
  }
  for (auto& m : report.mean_allocation) m /= static_cast<double>(report.decile_size);
  return report;
}

}  // namespace ocnc::ads
