#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "ocnc/ads/features.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/regress/adaboost.hpp"
#include "ocnc/regress/dataset.hpp"
#include "ocnc/regress/forest.hpp"
#include "ocnc/regress/mlp.hpp"
#include "ocnc/regress/tree.hpp"

namespace ocnc::regress {

enum class ModelKind { abr, dtr, mlp, rfr };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {ModelKind::abr, ModelKind::dtr, ModelKind::mlp,
                                                            ModelKind::rfr};

constexpr std::string_view name_of(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::abr: return "ABR";
    case ModelKind::dtr: return "DTR";
    case ModelKind::mlp: return "MLP";
    case ModelKind::rfr: return "RFR";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  for (auto k : kAllModelKinds) {
    const auto n = name_of(k);
    if (s.size() == n.size() &&
        std::equal(s.begin(), s.end(), n.begin(), [](char a, char b) { return std::toupper(a) == b; }))
      return k;
  }
  throw FormatError("unknown model kind '" + std::string(s) + "'");
}

// Hyperparameters of every kind; each fit uses only its own block.
struct ModelConfig {
  TreeParams dtr;
  ForestParams rfr;
  AdaBoostParams abr;
  MlpParams mlp;
};

namespace detail {

inline nlohmann::json params_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth ? nlohmann::json(*p.max_depth) : nlohmann::json(nullptr)},
          {"max_features", p.max_features}};
}
inline nlohmann::json params_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"bootstrap", p.bootstrap},
          {"max_features", p.max_features},
          {"max_depth", p.max_depth ? nlohmann::json(*p.max_depth) : nlohmann::json(nullptr)}};
}
inline nlohmann::json params_json(const AdaBoostParams& p) {
  return {{"n_estimators", p.n_estimators}, {"base_depth", p.base_depth}, {"learning_rate", p.learning_rate}};
}
inline nlohmann::json params_json(const MlpParams& p) {
  return {{"hidden_units", p.hidden_units}, {"epochs", p.epochs},   {"batch_size", p.batch_size},
          {"learning_rate", p.learning_rate}, {"beta1", p.beta1},   {"beta2", p.beta2},
          {"epsilon", p.epsilon}};
}

inline std::optional<std::size_t> optional_size(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::size_t>();
}

}  // namespace detail

// Partial JSON objects are merged over the defaults.
inline void from_json(const nlohmann::json& j, TreeParams& p) {
  if (j.contains("max_depth")) p.max_depth = detail::optional_size(j, "max_depth");
  p.max_features = j.value("max_features", p.max_features);
}
inline void from_json(const nlohmann::json& j, ForestParams& p) {
  p.n_trees = j.value("n_trees", p.n_trees);
  p.bootstrap = j.value("bootstrap", p.bootstrap);
  p.max_features = j.value("max_features", p.max_features);
  if (j.contains("max_depth")) p.max_depth = detail::optional_size(j, "max_depth");
}
inline void from_json(const nlohmann::json& j, AdaBoostParams& p) {
  p.n_estimators = j.value("n_estimators", p.n_estimators);
  p.base_depth = j.value("base_depth", p.base_depth);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
}
inline void from_json(const nlohmann::json& j, MlpParams& p) {
  p.hidden_units = j.value("hidden_units", p.hidden_units);
  p.epochs = j.value("epochs", p.epochs);
  p.batch_size = j.value("batch_size", p.batch_size);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.beta1 = j.value("beta1", p.beta1);
  p.beta2 = j.value("beta2", p.beta2);
  p.epsilon = j.value("epsilon", p.epsilon);
}

/// A fitted regressor viewed as feature vector -> predicted clicks. Immutable;
/// concurrent predict() calls are safe.
class TrainedModel {
 public:
  using Impl = std::variant<RegressionTree, RandomForest, AdaBoostR2, Mlp>;

  static constexpr std::string_view kFormat = "ocnc-model";
  static constexpr int kVersion = 1;

  TrainedModel(ModelKind kind, ads::FeatureCase feature_case, std::size_t dimension, std::uint64_t seed,
               nlohmann::json hyperparameters, Impl impl)
      : kind_(kind), case_(feature_case), dim_(dimension), seed_(seed),
        hyperparameters_(std::move(hyperparameters)), impl_(std::move(impl)) {}

  ModelKind kind() const noexcept { return kind_; }
  ads::FeatureCase feature_case() const noexcept { return case_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const nlohmann::json& hyperparameters() const noexcept { return hyperparameters_; }
  const Impl& impl() const noexcept { return impl_; }

  double predict(std::span<const double> x) const {
    if (x.size() != dim_) throw DimensionMismatchError(dim_, x.size());
    const double y = std::visit([&](const auto& m) { return m.predict(x); }, impl_);
    if (!std::isfinite(y)) throw Error("model produced a non-finite prediction");
    return y;
  }

  nlohmann::json to_json() const {
    nlohmann::json params = std::visit([](const auto& m) { return m.to_json(); }, impl_);
    return {{"format", kFormat},
            {"version", kVersion},
            {"kind", name_of(kind_)},
            {"case", std::string(1, ads::case_tag(case_))},
            {"dimension", dim_},
            {"seed", seed_},
            {"hyperparameters", hyperparameters_},
            {"parameters", std::move(params)}};
  }

  static TrainedModel from_json(const nlohmann::json& j) {
    try {
      if (j.at("format").get<std::string>() != kFormat) throw FormatError("not a model file");
      if (j.at("version").get<int>() != kVersion)
        throw FormatError("unsupported model version " + j["version"].dump());
      const auto kind = parse_model_kind(j.at("kind").get<std::string>());
      const auto& p = j.at("parameters");
      Impl impl;
      switch (kind) {
        case ModelKind::dtr: impl = RegressionTree::from_json(p); break;
        case ModelKind::rfr: impl = RandomForest::from_json(p); break;
        case ModelKind::abr: impl = AdaBoostR2::from_json(p); break;
        case ModelKind::mlp: impl = Mlp::from_json(p); break;
      }
      return TrainedModel(kind, ads::parse_case(j.at("case").get<std::string>()),
                          j.at("dimension").get<std::size_t>(), j.at("seed").get<std::uint64_t>(),
                          j.at("hyperparameters"), std::move(impl));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad model file: ") + e.what());
    }
  }

 private:
  ModelKind kind_;
  ads::FeatureCase case_;
  std::size_t dim_;
  std::uint64_t seed_;
  nlohmann::json hyperparameters_;
  Impl impl_;
};

inline TrainedModel fit_dtr(const Dataset& data, const TreeParams& params = {}, std::uint64_t seed = 0) {
  if (data.empty()) throw InvalidArgument("cannot fit on an empty dataset");
  Rng rng(seed);
  return {ModelKind::dtr, data.feature_case(), data.dimension(), seed, detail::params_json(params),
          RegressionTree::fit(data, params, rng)};
}

inline TrainedModel fit_rfr(const Dataset& data, const ForestParams& params = {}, std::uint64_t seed = 0) {
  return {ModelKind::rfr, data.feature_case(), data.dimension(), seed, detail::params_json(params),
          RandomForest::fit(data, params, seed)};
}

inline TrainedModel fit_abr(const Dataset& data, const AdaBoostParams& params = {}, std::uint64_t seed = 0) {
  return {ModelKind::abr, data.feature_case(), data.dimension(), seed, detail::params_json(params),
          AdaBoostR2::fit(data, params, seed)};
}

inline TrainedModel fit_mlp(const Dataset& data, const MlpParams& params = {}, std::uint64_t seed = 0) {
  return {ModelKind::mlp, data.feature_case(), data.dimension(), seed, detail::params_json(params),
          Mlp::fit(data, params, seed)};
}

inline TrainedModel fit_model(ModelKind kind, const Dataset& data, const ModelConfig& config, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::dtr: return fit_dtr(data, config.dtr, seed);
    case ModelKind::rfr: return fit_rfr(data, config.rfr, seed);
    case ModelKind::abr: return fit_abr(data, config.abr, seed);
    case ModelKind::mlp: return fit_mlp(data, config.mlp, seed);
  }
  throw InvalidArgument("unknown model kind");
}

}  // namespace ocnc::regress
