#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ocnc/ads/influence.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/core/text.hpp"
#include "ocnc/harness/config.hpp"
#include "ocnc/harness/data.hpp"
#include "ocnc/harness/svg_chart.hpp"
#include "ocnc/regress/model.hpp"
#include "ocnc/regress/pearson.hpp"
#include "ocnc/solve/solvers.hpp"
#include "ocnc/solve/value_function.hpp"

namespace ocnc::harness {

// Seed streams derived from the master seed. Model streams are keyed by kind,
// so a model's seed does not depend on which other models are configured.
inline std::uint64_t split_seed(std::uint64_t master) { return derive_seed(master, 0); }
inline std::uint64_t model_seed(std::uint64_t master, regress::ModelKind kind) {
  return derive_seed(master, 1 + static_cast<std::uint64_t>(kind));
}
inline std::uint64_t solver_seed(std::uint64_t master, regress::ModelKind kind, solve::SolverKind solver,
                                 std::uint64_t k) {
  return derive_seed(derive_seed(master, 100 + static_cast<std::uint64_t>(kind)),
                     k * 8 + static_cast<std::uint64_t>(solver));
}

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / name).string());
  return out;
}

struct ModelEvaluation {
  regress::ModelKind kind;
  ads::FeatureCase feature_case;
  double pearson = 0.0;
  std::vector<std::string> test_ids;
  std::vector<double> actual;
  std::vector<double> predicted;
};

struct PipelineResult {
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::vector<ModelEvaluation> evaluations;  // config model order
};

/// ingest -> map -> vectorize -> split -> fit every configured model -> Pearson
/// on the held-out rows.
inline PipelineResult run_pipeline(const ExperimentConfig& config) {
  const auto mapped = load_and_map(config);
  const auto labeled = build_dataset(mapped, config.feature_case);
  const auto [train_idx, test_idx] =
      stage("split", [&] { return regress::split_indices(labeled.data.rows(), config.train_fraction, split_seed(config.seed)); });
  const auto train = labeled.data.subset(train_idx);
  const auto test = labeled.data.subset(test_idx);

  PipelineResult result{train.rows(), test.rows(), {}};
  for (auto kind : config.models) {
    const auto model = stage("train", [&] {
      return regress::fit_model(kind, train, config.hyperparameters, model_seed(config.seed, kind));
    });
    ModelEvaluation ev{kind, config.feature_case, 0.0, {}, {}, {}};
    for (std::size_t r = 0; r < test.rows(); ++r) {
      ev.test_ids.push_back(labeled.ids[test_idx[r]]);
      ev.actual.push_back(test.target(r));
      ev.predicted.push_back(stage("evaluate", [&] { return model.predict(test.row(r)); }));
    }
    ev.pearson = stage("evaluate", [&] { return regress::pearson(ev.actual, ev.predicted); });
    result.evaluations.push_back(std::move(ev));
  }
  return result;
}

inline void write_pipeline_outputs(const PipelineResult& r, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir, "report.csv");
    text::write_csv_row(out, {"model", "case", "pearson"});
    for (const auto& ev : r.evaluations)
      text::write_csv_row(out, {std::string(regress::name_of(ev.kind)), std::string(1, ads::case_tag(ev.feature_case)),
                                text::format_double(ev.pearson)});
  }
  {
    auto out = open_output(dir, "predictions.csv");
    text::write_csv_row(out, {"model", "id", "actual", "predicted"});
    for (const auto& ev : r.evaluations)
      for (std::size_t i = 0; i < ev.actual.size(); ++i)
        text::write_csv_row(out, {std::string(regress::name_of(ev.kind)), ev.test_ids[i],
                                  text::format_double(ev.actual[i]), text::format_double(ev.predicted[i])});
  }
  for (const auto& ev : r.evaluations) {
    const std::string name(regress::name_of(ev.kind));
    Series s{name, {}};
    for (std::size_t i = 0; i < ev.actual.size(); ++i) s.points.emplace_back(ev.actual[i], ev.predicted[i]);
    auto out = open_output(dir, "scatter_" + name + ".svg");
    write_svg_chart(out,
                    {name + " (case " + std::string(1, ads::case_tag(ev.feature_case)) + ", r = " +
                         text::format_double(std::round(ev.pearson * 1e4) / 1e4) + ")",
                     "actual clicks", "predicted clicks", ChartStyle::markers, true},
                    {s});
  }
}

struct TrainedSet {
  std::vector<regress::TrainedModel> models;  // config model order
  std::size_t train_rows = 0;
};

// Fits every configured model on the training side of the split.
inline TrainedSet run_training(const ExperimentConfig& config) {
  const auto mapped = load_and_map(config);
  const auto labeled = build_dataset(mapped, config.feature_case);
  const auto [train, test] =
      stage("split", [&] { return regress::split(labeled.data, config.train_fraction, split_seed(config.seed)); });
  TrainedSet set;
  set.train_rows = train.rows();
  for (auto kind : config.models)
    set.models.push_back(stage("train", [&] {
      return regress::fit_model(kind, train, config.hyperparameters, model_seed(config.seed, kind));
    }));
  return set;
}

inline void write_models(const TrainedSet& set, const std::filesystem::path& dir) {
  for (const auto& m : set.models) {
    auto out = open_output(dir / "models", std::string(regress::name_of(m.kind())) + ".json");
    out << m.to_json().dump(2) << '\n';
  }
}

// Frozen spend/days for Case B/C objectives: configured, else the column medians
// (lower median for even row counts).
inline std::vector<double> objective_context(const ExperimentConfig& config, const regress::Dataset& data) {
  if (config.context) return *config.context;
  std::vector<double> ctx;
  for (std::size_t j = 0; j < ads::context_width(data.feature_case()); ++j) {
    std::vector<double> col(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) col[i] = data.feature(i, j);
    auto mid = col.begin() + static_cast<std::ptrdiff_t>((col.size() - 1) / 2);
    std::nth_element(col.begin(), mid, col.end());
    ctx.push_back(*mid);
  }
  return ctx;
}

struct OptimizeRow {
  regress::ModelKind model;
  solve::SolverKind solver;
  std::uint64_t k;
  std::optional<solve::SolverResult> result;  // absent: brute-force cap exceeded
};

// One solve per (model, solver, k) with models fitted on all rows.
inline std::vector<OptimizeRow> run_optimize(const ExperimentConfig& config) {
  const auto mapped = load_and_map(config);
  const auto labeled = build_dataset(mapped, config.feature_case);
  const auto context = objective_context(config, labeled.data);
  std::vector<OptimizeRow> rows;
  for (auto kind : config.models) {
    const auto model = stage("train", [&] {
      return regress::fit_model(kind, labeled.data, config.hyperparameters, model_seed(config.seed, kind));
    });
    stage("optimize", [&] {
      const solve::ModelValue value(model, context);
      const solve::CachedValue cached(value);
      for (auto solver : config.solvers)
        for (auto k = config.budget_min; k <= config.budget_max; ++k) {
          OptimizeRow row{kind, solver, k, std::nullopt};
          try {
            row.result = solve::solve(solver, cached, k, config.solver_options, solver_seed(config.seed, kind, solver, k));
          } catch (const CapExceededError&) {
          }
          rows.push_back(std::move(row));
        }
    });
  }
  return rows;
}

inline void write_optimize_outputs(const std::vector<OptimizeRow>& rows, const std::vector<ConceptNode>& nodes,
                                   const std::filesystem::path& dir) {
  auto out = open_output(dir, "optimize.csv");
  std::vector<std::string> header = {"model", "solver", "k", "value", "evaluations"};
  for (auto n : nodes) header.emplace_back(name_of(n));
  text::write_csv_row(out, header);
  for (const auto& r : rows) {
    std::vector<std::string> f = {std::string(regress::name_of(r.model)), std::string(solve::name_of(r.solver)),
                                  std::to_string(r.k)};
    if (r.result) {
      f.push_back(text::format_double(r.result->value));
      f.push_back(std::to_string(r.result->evaluations));
      for (auto c : r.result->best) f.push_back(std::to_string(c));
    } else {
      f.resize(f.size() + 2 + nodes.size());
    }
    text::write_csv_row(out, f);
  }
}

inline ads::InfluenceReport run_influence(const ExperimentConfig& config) {
  const auto mapped = load_and_map(config);
  return stage("influence",
               [&] { return ads::influence_analysis(mapped.ads, mapped.combinations(), mapped.nodes); });
}

inline void write_influence_outputs(const ads::InfluenceReport& report, const std::filesystem::path& dir) {
  auto out = open_output(dir, "influence.csv");
  text::write_csv_row(out, {"node", "mean_allocation"});
  for (const auto& [node, mean] : report.ranked())
    text::write_csv_row(out, {std::string(name_of(node)), text::format_double(mean)});
}

}  // namespace ocnc::harness
