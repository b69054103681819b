#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocnc/ads/features.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"

namespace ocnc::regress {

/// Rows of equal-length feature vectors with a click target each, stored row-major.
class Dataset {
 public:
  Dataset() = default;
  Dataset(ads::FeatureCase feature_case, std::size_t dimension)
      : case_(feature_case), dim_(dimension) {}

  ads::FeatureCase feature_case() const noexcept { return case_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return targets_.empty(); }

  std::span<const double> row(std::size_t i) const { return {features_.data() + i * dim_, dim_}; }
  double feature(std::size_t i, std::size_t j) const { return features_[i * dim_ + j]; }
  double target(std::size_t i) const { return targets_[i]; }
  std::span<const double> targets() const noexcept { return targets_; }

  void add(std::span<const double> x, double y) {
    if (x.size() != dim_) throw DimensionMismatchError(dim_, x.size());
    features_.insert(features_.end(), x.begin(), x.end());
    targets_.push_back(y);
  }

  Dataset subset(std::span<const std::size_t> indices) const {
    Dataset out(case_, dim_);
    out.features_.reserve(indices.size() * dim_);
    out.targets_.reserve(indices.size());
    for (auto i : indices) out.add(row(i), target(i));
    return out;
  }

  std::pair<double, double> target_range() const {
    if (empty()) throw InvalidArgument("empty dataset");
    const auto [lo, hi] = std::minmax_element(targets_.begin(), targets_.end());
    return {*lo, *hi};
  }

 private:
  ads::FeatureCase case_ = ads::FeatureCase::A;
  std::size_t dim_ = 0;
  std::vector<double> features_;
  std::vector<double> targets_;
};

// Seeded shuffle of 0..m-1; the first ceil(fraction * m) indices train, the rest test.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t m,
                                                                                   double train_fraction,
                                                                                   std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InvalidArgument("train fraction must lie strictly between 0 and 1");
  if (m < 2) throw InvalidArgument("need at least two rows to split");
  // The small slack keeps e.g. 0.95 * 100 from rounding up to 96.
  const auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(m) - 1e-9));
  if (n_train == 0 || n_train >= m)
    throw InvalidArgument("split of " + std::to_string(m) + " rows leaves an empty side");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  idx.resize(n_train);
  return {std::move(idx), std::move(test)};
}

inline std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  const auto [train, test] = split_indices(data.rows(), train_fraction, seed);
  return {data.subset(train), data.subset(test)};
}

}  // namespace ocnc::regress
