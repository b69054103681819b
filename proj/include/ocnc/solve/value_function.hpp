#pragma once

#include <atomic>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ocnc/core/combination.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/regress/model.hpp"

namespace ocnc::solve {

/// Anything that scores a node combination. Must be pure: the same combination
/// always yields the same value.
template <typename F>
concept ValueFunction = requires(const F& f, const Combination& c) {
  { f(c) } -> std::convertible_to<double>;
  { f.dimension() } -> std::convertible_to<std::size_t>;
};

class LinearValue {
 public:
  explicit LinearValue(std::vector<double> weights) : w_(std::move(weights)) {}
  std::size_t dimension() const noexcept { return w_.size(); }
  double operator()(const Combination& c) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * c[i];
    return s;
  }

 private:
  std::vector<double> w_;
};

class FunctionValue {
 public:
  FunctionValue(std::size_t dimension, std::function<double(const Combination&)> fn)
      : dim_(dimension), fn_(std::move(fn)) {}
  std::size_t dimension() const noexcept { return dim_; }
  double operator()(const Combination& c) const { return fn_(c); }

 private:
  std::size_t dim_;
  std::function<double(const Combination&)> fn_;
};

/// A trained model as an objective. For Case B/C models the spend (and days
/// online) slots are frozen to `context`, and only the counts vary.
class ModelValue {
 public:
  explicit ModelValue(const regress::TrainedModel& model, std::vector<double> context = {})
      : model_(&model), context_(std::move(context)) {
    if (context_.size() != ads::context_width(model.feature_case()))
      throw InvalidArgument("model case " + std::string(1, ads::case_tag(model.feature_case())) + " needs " +
                            std::to_string(ads::context_width(model.feature_case())) + " context values");
    if (model.dimension() < context_.size()) throw InvalidArgument("model dimension too small");
  }

  std::size_t dimension() const noexcept { return model_->dimension() - context_.size(); }

  double operator()(const Combination& c) const {
    if (c.size() != dimension()) throw DimensionMismatchError(dimension(), c.size());
    std::vector<double> x(context_);
    x.reserve(model_->dimension());
    for (auto v : c) x.push_back(static_cast<double>(v));
    return model_->predict(x);
  }

 private:
  const regress::TrainedModel* model_;
  std::vector<double> context_;
};

/// Counts calls to the wrapped function. The counter is atomic, so concurrent
/// evaluation is allowed when the wrapped function allows it.
template <ValueFunction F>
class CountingValue {
 public:
  explicit CountingValue(const F& inner) : inner_(&inner) {}
  std::size_t dimension() const { return inner_->dimension(); }
  double operator()(const Combination& c) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return (*inner_)(c);
  }
  std::uint64_t evaluations() const noexcept { return calls_.load(std::memory_order_relaxed); }

 private:
  const F* inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// Memoizes the wrapped function. Not thread-safe; use one per worker.
template <ValueFunction F>
class CachedValue {
 public:
  explicit CachedValue(const F& inner) : inner_(&inner) {}
  std::size_t dimension() const { return inner_->dimension(); }
  double operator()(const Combination& c) const {
    auto it = cache_.find(c);
    if (it != cache_.end()) return it->second;
    const double v = (*inner_)(c);
    cache_.emplace(c, v);
    return v;
  }
  std::size_t distinct_evaluations() const noexcept { return cache_.size(); }

 private:
  const F* inner_;
  mutable std::unordered_map<Combination, double, CombinationHash> cache_;
};

}  // namespace ocnc::solve
