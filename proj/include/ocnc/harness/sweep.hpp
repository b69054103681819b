#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ocnc/harness/pipeline.hpp"

namespace ocnc::harness {

struct SweepCurve {
  regress::ModelKind model;
  solve::SolverKind solver;
  std::vector<std::optional<double>> mean_value;  // index k - budget_min; absent if any iteration hit the cap
};

struct SweepResult {
  std::uint64_t budget_min = 0;
  std::uint64_t budget_max = 0;
  std::size_t iterations = 0;
  std::vector<SweepCurve> curves;  // model-major, both in config order
};

inline std::uint64_t iteration_seed(std::uint64_t master, std::size_t i) {
  return derive_seed(derive_seed(master, 0x5eed), i);
}

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Fig.-4-style budget sweep. Each iteration draws its own seed from (master
/// seed, iteration index), reshuffles the full row set with it and refits every
/// model; all solvers and budgets then share one memoized objective per model.
/// Per-iteration values are summed in iteration order, so the means do not
/// depend on the number of workers.
inline SweepResult run_sweep(const ExperimentConfig& config, const SweepProgress& progress = {}) {
  const auto mapped = load_and_map(config);
  const auto labeled = build_dataset(mapped, config.feature_case);
  const auto& data = labeled.data;
  const auto context = objective_context(config, data);
  const std::size_t n_k = config.budget_max - config.budget_min + 1;
  const std::size_t n_cells = config.models.size() * config.solvers.size() * n_k;

  // values[i][cell]; cell = (model * solvers + solver) * n_k + (k - min)
  std::vector<std::vector<std::optional<double>>> values(config.iterations);

  auto run_iteration = [&](std::size_t it) {
    const auto seed = iteration_seed(config.seed, it);
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(seed, 0));
    shuffle_rng.shuffle(order);
    const auto shuffled = data.subset(order);

    auto& out = values[it];
    out.assign(n_cells, std::nullopt);
    for (std::size_t m = 0; m < config.models.size(); ++m) {
      const auto kind = config.models[m];
      const auto model = regress::fit_model(kind, shuffled, config.hyperparameters, model_seed(seed, kind));
      const solve::ModelValue value(model, context);
      const solve::CachedValue cached(value);
      for (std::size_t s = 0; s < config.solvers.size(); ++s)
        for (std::size_t kk = 0; kk < n_k; ++kk) {
          const auto k = config.budget_min + kk;
          try {
            const auto r = solve::solve(config.solvers[s], cached, k, config.solver_options,
                                        solver_seed(seed, kind, config.solvers[s], k));
            out[(m * config.solvers.size() + s) * n_k + kk] = r.value;
          } catch (const CapExceededError&) {
          }
        }
    }
  };

  stage("sweep", [&] {
    const std::size_t workers = std::min(config.workers, config.iterations);
    std::atomic<std::size_t> next{0}, done{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
      for (std::size_t it; (it = next.fetch_add(1)) < config.iterations;) {
        {
          std::lock_guard lock(mu);
          if (failure) return;
        }
        try {
          run_iteration(it);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
        const auto d = done.fetch_add(1) + 1;
        if (progress) {
          std::lock_guard lock(mu);
          progress(d, config.iterations);
        }
      }
    };
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
  });

  SweepResult result{config.budget_min, config.budget_max, config.iterations, {}};
  for (std::size_t m = 0; m < config.models.size(); ++m)
    for (std::size_t s = 0; s < config.solvers.size(); ++s) {
      SweepCurve curve{config.models[m], config.solvers[s], {}};
      for (std::size_t kk = 0; kk < n_k; ++kk) {
        const auto cell = (m * config.solvers.size() + s) * n_k + kk;
        std::optional<double> sum = 0.0;
        for (const auto& v : values) {
          if (!v[cell]) {
            sum.reset();
            break;
          }
          *sum += *v[cell];
        }
        curve.mean_value.push_back(sum ? std::optional(*sum / static_cast<double>(config.iterations)) : std::nullopt);
      }
      result.curves.push_back(std::move(curve));
    }
  return result;
}

inline void write_sweep_outputs(const SweepResult& r, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir, "curves.csv");
    text::write_csv_row(out, {"model", "solver", "k", "mean_value"});
    for (const auto& c : r.curves)
      for (std::size_t kk = 0; kk < c.mean_value.size(); ++kk)
        text::write_csv_row(out, {std::string(regress::name_of(c.model)), std::string(solve::name_of(c.solver)),
                                  std::to_string(r.budget_min + kk),
                                  c.mean_value[kk] ? text::format_double(*c.mean_value[kk]) : ""});
  }
  std::vector<regress::ModelKind> models;
  for (const auto& c : r.curves)
    if (std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
  for (auto m : models) {
    std::vector<Series> series;
    for (const auto& c : r.curves) {
      if (c.model != m) continue;
      Series s{std::string(solve::name_of(c.solver)), {}};
      for (std::size_t kk = 0; kk < c.mean_value.size(); ++kk)
        if (c.mean_value[kk]) s.points.emplace_back(static_cast<double>(r.budget_min + kk), *c.mean_value[kk]);
      series.push_back(std::move(s));
    }
    const std::string name(regress::name_of(m));
    auto out = open_output(dir, "curves_" + name + ".svg");
    write_svg_chart(out,
                    {name + ": mean predicted clicks over " + std::to_string(r.iterations) + " iterations",
                     "budget k", "predicted clicks", ChartStyle::lines, false},
                    series);
  }
}

}  // namespace ocnc::harness
