#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/regress/dataset.hpp"

namespace ocnc::regress {

struct TreeParams {
  std::optional<std::size_t> max_depth;  // unlimited when empty
  std::size_t max_features = 0;          // features tried per split; 0 means all
};

/// CART regression tree.
///
/// Splits maximize the reduction of the summed squared error. Candidate
/// thresholds are midpoints between consecutive distinct values of a feature;
/// a sample goes left when x[feature] <= threshold. Ties go to the lower feature
/// index, then the smaller threshold. A node becomes a leaf (mean target) when
/// it has fewer than two samples, all targets are equal, the depth limit is hit,
/// or no candidate split lowers the error.
class RegressionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
  };

  RegressionTree() = default;
  RegressionTree(std::size_t dimension, std::vector<Node> nodes)
      : dim_(dimension), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw FormatError("tree without nodes");
    for (const auto& n : nodes_)
      if (n.feature >= 0 && (static_cast<std::size_t>(n.feature) >= dim_ || n.left <= 0 ||
                             n.right <= 0 || static_cast<std::size_t>(n.left) >= nodes_.size() ||
                             static_cast<std::size_t>(n.right) >= nodes_.size()))
        throw FormatError("malformed tree node");
  }

  // `sample` lists the row indices to grow on (repeats allowed, as in a bootstrap).
  // `rng` is only drawn from when max_features restricts the candidate features.
  static RegressionTree fit(const Dataset& data, std::span<const std::size_t> sample,
                            const TreeParams& params, Rng& rng) {
    if (sample.empty()) throw InvalidArgument("cannot grow a tree on zero samples");
    Builder b{data, params, rng, {}, {sample.begin(), sample.end()}, {}, {}};
    b.features.resize(data.dimension());
    b.build(0, b.index.size(), 0);
    return RegressionTree(data.dimension(), std::move(b.nodes));
  }

  static RegressionTree fit(const Dataset& data, const TreeParams& params, Rng& rng) {
    std::vector<std::size_t> all(data.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return fit(data, all, params, rng);
  }

  double predict(std::span<const double> x) const {
    const Node* n = &nodes_[0];
    while (n->feature >= 0)
      n = &nodes_[x[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left : n->right];
    return n->value;
  }

  std::size_t dimension() const noexcept { return dim_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
  }
  std::size_t depth() const { return depth_from(0); }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : nodes_) {
      if (n.feature < 0)
        arr.push_back({{"value", n.value}});
      else
        arr.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                       {"right", n.right}, {"value", n.value}});
    }
    return {{"dimension", dim_}, {"nodes", arr}};
  }

  static RegressionTree from_json(const nlohmann::json& j) {
    std::vector<Node> nodes;
    for (const auto& n : j.at("nodes")) {
      Node node;
      node.value = n.at("value").get<double>();
      if (n.contains("feature")) {
        node.feature = n["feature"].get<std::int32_t>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<std::int32_t>();
        node.right = n.at("right").get<std::int32_t>();
      }
      nodes.push_back(node);
    }
    return RegressionTree(j.at("dimension").get<std::size_t>(), std::move(nodes));
  }

 private:
  struct Builder {
    const Dataset& data;
    const TreeParams& params;
    Rng& rng;
    std::vector<Node> nodes;
    std::vector<std::size_t> index;
    std::vector<std::size_t> features;
    std::vector<std::pair<double, double>> scratch;  // (feature value, target)

    std::int32_t build(std::size_t begin, std::size_t end, std::size_t depth) {
      const auto id = static_cast<std::int32_t>(nodes.size());
      nodes.emplace_back();
      const std::size_t n = end - begin;

      double sum = 0.0;
      bool constant = true;
      const double first = data.target(index[begin]);
      for (std::size_t i = begin; i < end; ++i) {
        const double y = data.target(index[i]);
        sum += y;
        constant = constant && y == first;
      }
      nodes[id].value = sum / static_cast<double>(n);
      if (n < 2 || constant || (params.max_depth && depth >= *params.max_depth)) return id;

      const auto candidates = pick_features();
      const double parent_proxy = sum * sum / static_cast<double>(n);
      double best_proxy = parent_proxy;
      std::int32_t best_feature = -1;
      double best_threshold = 0.0;

      for (auto f : candidates) {
        scratch.clear();
        for (std::size_t i = begin; i < end; ++i)
          scratch.emplace_back(data.feature(index[i], f), data.target(index[i]));
        std::stable_sort(scratch.begin(), scratch.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        double left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          left_sum += scratch[i].second;
          const double lo = scratch[i].first;
          const double hi = scratch[i + 1].first;
          if (!(lo < hi)) continue;
          const double n_left = static_cast<double>(i + 1);
          const double n_right = static_cast<double>(n - i - 1);
          const double right_sum = sum - left_sum;
          const double proxy = left_sum * left_sum / n_left + right_sum * right_sum / n_right;
          if (proxy > best_proxy) {
            best_proxy = proxy;
            best_feature = static_cast<std::int32_t>(f);
            double mid = lo + (hi - lo) / 2.0;
            if (!(mid < hi)) mid = lo;
            best_threshold = mid;
          }
        }
      }
      if (best_feature < 0) return id;

      const auto f = static_cast<std::size_t>(best_feature);
      const auto mid_it = std::stable_partition(
          index.begin() + static_cast<std::ptrdiff_t>(begin), index.begin() + static_cast<std::ptrdiff_t>(end),
          [&](std::size_t r) { return data.feature(r, f) <= best_threshold; });
      const auto split = static_cast<std::size_t>(mid_it - index.begin());

      nodes[id].feature = best_feature;
      nodes[id].threshold = best_threshold;
      const auto left = build(begin, split, depth + 1);
      const auto right = build(split, end, depth + 1);
      nodes[id].left = left;
      nodes[id].right = right;
      return id;
    }

    // Ascending feature indices, so the strict '>' above prefers the lowest index on ties.
    std::vector<std::size_t> pick_features() {
      const std::size_t d = data.dimension();
      std::iota(features.begin(), features.end(), std::size_t{0});
      if (params.max_features == 0 || params.max_features >= d) return features;
      for (std::size_t i = 0; i < params.max_features; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.index(d - i));
        std::swap(features[i], features[j]);
      }
      std::vector<std::size_t> chosen(features.begin(),
                                      features.begin() + static_cast<std::ptrdiff_t>(params.max_features));
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    }
  };

  std::size_t depth_from(std::size_t i) const {
    const auto& n = nodes_[i];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_from(static_cast<std::size_t>(n.left)),
                        depth_from(static_cast<std::size_t>(n.right)));
  }

  std::size_t dim_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace ocnc::regress
