#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocnc/core/rng.hpp"
#include "ocnc/regress/dataset.hpp"
#include "ocnc/regress/tree.hpp"

namespace ocnc::regress {

struct ForestParams {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  std::size_t max_features = 0;  // 0: max(1, floor(d / 3))
  std::optional<std::size_t> max_depth;

  std::size_t features_per_split(std::size_t d) const {
    if (max_features) return std::min(max_features, d);
    return std::max<std::size_t>(1, d / 3);
  }
};

// Bagged CART trees with a fresh random feature subset at every split. Tree t
// draws from its own stream seeded by (seed, t), so trees are independent of
// the order they are grown in.
class RandomForest {
 public:
  RandomForest() = default;
  explicit RandomForest(std::vector<RegressionTree> trees) : trees_(std::move(trees)) {
    if (trees_.empty()) throw FormatError("forest without trees");
  }

  static RandomForest fit(const Dataset& data, const ForestParams& params, std::uint64_t seed) {
    if (params.n_trees < 1) throw InvalidArgument("forest needs at least one tree");
    if (data.empty()) throw InvalidArgument("cannot fit on an empty dataset");
    const TreeParams tree_params{params.max_depth, params.features_per_split(data.dimension())};
    const std::size_t m = data.rows();
    std::vector<RegressionTree> trees;
    trees.reserve(params.n_trees);
    std::vector<std::size_t> sample(m);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      Rng rng(derive_seed(seed, t));
      if (params.bootstrap)
        for (auto& s : sample) s = static_cast<std::size_t>(rng.index(m));
      else
        std::iota(sample.begin(), sample.end(), std::size_t{0});
      trees.push_back(RegressionTree::fit(data, sample, tree_params, rng));
    }
    return RandomForest(std::move(trees));
  }

  double predict(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(x);
    return sum / static_cast<double>(trees_.size());
  }

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : trees_) arr.push_back(t.to_json());
    return {{"trees", arr}};
  }

  static RandomForest from_json(const nlohmann::json& j) {
    std::vector<RegressionTree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(RegressionTree::from_json(t));
    return RandomForest(std::move(trees));
  }

 private:
  std::vector<RegressionTree> trees_;
};

}  // namespace ocnc::regress
