#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocnc/core/rng.hpp"
#include "ocnc/regress/dataset.hpp"
#include "ocnc/regress/tree.hpp"

namespace ocnc::regress {

struct AdaBoostParams {
  std::size_t n_estimators = 50;
  std::size_t base_depth = 3;
  double learning_rate = 1.0;
};

// Outcome of one AdaBoost.R2 round with linear loss.
struct BoostRound {
  RegressionTree tree;
  std::vector<double> losses;  // |prediction - target| / max, per training row
  double average_loss = 0.0;   // weighted by the incoming sample weights
  double beta = 0.0;           // average_loss / (1 - average_loss)
  std::vector<double> next_weights;  // updated and renormalized
};

// One round on an explicit resample. `weights` must sum to 1.
inline BoostRound boost_round(const Dataset& data, std::span<const double> weights,
                              std::span<const std::size_t> resample, const AdaBoostParams& params,
                              Rng& rng) {
  BoostRound r;
  r.tree = RegressionTree::fit(data, resample, TreeParams{params.base_depth, 0}, rng);
  const std::size_t m = data.rows();
  r.losses.resize(m);
  double max_loss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    r.losses[i] = std::abs(r.tree.predict(data.row(i)) - data.target(i));
    max_loss = std::max(max_loss, r.losses[i]);
  }
  if (max_loss > 0.0)
    for (auto& l : r.losses) l /= max_loss;
  for (std::size_t i = 0; i < m; ++i) r.average_loss += weights[i] * r.losses[i];

  r.next_weights.assign(weights.begin(), weights.end());
  if (r.average_loss > 0.0 && r.average_loss < 0.5) {
    r.beta = r.average_loss / (1.0 - r.average_loss);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r.next_weights[i] *= std::pow(r.beta, (1.0 - r.losses[i]) * params.learning_rate);
      total += r.next_weights[i];
    }
    for (auto& w : r.next_weights) w /= total;
  }
  return r;
}

// Row indices drawn with replacement, proportional to `weights`.
inline std::vector<std::size_t> weighted_resample(std::span<const double> weights, Rng& rng) {
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());
  const double total = cdf.back();
  std::vector<std::size_t> out(weights.size());
  for (auto& o : out) {
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    o = std::min(static_cast<std::size_t>(it - cdf.begin()), weights.size() - 1);
  }
  return out;
}

/// AdaBoost.R2 (linear loss) over depth-limited CART trees; predictions are the
/// weighted median of the trees with weights log(1/beta).
class AdaBoostR2 {
 public:
  AdaBoostR2() = default;
  AdaBoostR2(std::vector<RegressionTree> trees, std::vector<double> weights)
      : trees_(std::move(trees)), weights_(std::move(weights)) {
    if (trees_.empty() || trees_.size() != weights_.size()) throw FormatError("malformed boosted ensemble");
  }

  static AdaBoostR2 fit(const Dataset& data, const AdaBoostParams& params, std::uint64_t seed) {
    if (params.n_estimators < 1) throw InvalidArgument("boosting needs at least one estimator");
    if (data.empty()) throw InvalidArgument("cannot fit on an empty dataset");
    const std::size_t m = data.rows();
    std::vector<double> w(m, 1.0 / static_cast<double>(m));
    std::vector<RegressionTree> trees;
    std::vector<double> tree_weights;
    for (std::size_t t = 0; t < params.n_estimators; ++t) {
      Rng rng(derive_seed(seed, t));
      const auto resample = weighted_resample(w, rng);
      auto round = boost_round(data, w, resample, params, rng);
      if (round.average_loss <= 0.0) {  // perfect fit
        trees.push_back(std::move(round.tree));
        tree_weights.push_back(1.0);
        break;
      }
      if (round.average_loss >= 0.5) {
        if (trees.empty()) {  // keep the lone tree so the model is usable
          trees.push_back(std::move(round.tree));
          tree_weights.push_back(1.0);
        }
        break;
      }
      trees.push_back(std::move(round.tree));
      tree_weights.push_back(params.learning_rate * std::log(1.0 / round.beta));
      w = std::move(round.next_weights);
    }
    return AdaBoostR2(std::move(trees), std::move(tree_weights));
  }

  double predict(std::span<const double> x) const {
    std::vector<std::pair<double, double>> pw(trees_.size());
    for (std::size_t i = 0; i < trees_.size(); ++i) pw[i] = {trees_[i].predict(x), weights_[i]};
    return weighted_median(pw);
  }

  // First prediction (in ascending order, ties by estimator order) whose
  // cumulative weight reaches half the total.
  static double weighted_median(std::vector<std::pair<double, double>> pw) {
    std::stable_sort(pw.begin(), pw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0.0;
    for (const auto& p : pw) total += p.second;
    double acc = 0.0;
    for (const auto& p : pw) {
      acc += p.second;
      if (acc >= 0.5 * total) return p.first;
    }
    return pw.back().first;
  }

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  const std::vector<double>& estimator_weights() const noexcept { return weights_; }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : trees_) arr.push_back(t.to_json());
    return {{"trees", arr}, {"weights", weights_}};
  }

  static AdaBoostR2 from_json(const nlohmann::json& j) {
    std::vector<RegressionTree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(RegressionTree::from_json(t));
    return AdaBoostR2(std::move(trees), j.at("weights").get<std::vector<double>>());
  }

 private:
  std::vector<RegressionTree> trees_;
  std::vector<double> weights_;
};

}  // namespace ocnc::regress
