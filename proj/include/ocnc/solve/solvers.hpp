#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocnc/core/combination.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/solve/value_function.hpp"

namespace ocnc::solve {

enum class SolverKind { brute, greedy, genetic, random };

inline constexpr std::array<SolverKind, 4> kAllSolvers = {SolverKind::brute, SolverKind::greedy,
                                                          SolverKind::genetic, SolverKind::random};

constexpr std::string_view name_of(SolverKind s) noexcept {
  switch (s) {
    case SolverKind::brute: return "brute";
    case SolverKind::greedy: return "greedy";
    case SolverKind::genetic: return "genetic";
    case SolverKind::random: return "random";
  }
  return "?";
}

inline SolverKind parse_solver(std::string_view s) {
  for (auto k : kAllSolvers)
    if (name_of(k) == s) return k;
  throw FormatError("unknown solver '" + std::string(s) + "'");
}

struct SolverResult {
  Combination best;
  double value = 0.0;  // f(best)
  std::uint64_t evaluations = 0;
  SolverKind solver = SolverKind::brute;
  std::uint64_t seed = 0;
};

// C(n + k, n), saturating at UINT64_MAX.
inline std::uint64_t feasible_count(std::uint64_t k, std::size_t n) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    r = r * (k + i) / i;  // exact: r is C(k + i, i) after this step
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

/// Greedy allocation: start from zero and spend the whole budget one unit at a
/// time, each time moving to the best child (ties: lowest slot). Uses k * |N|
/// evaluations; k = 0 evaluates the zero combination once to report its value.
template <ValueFunction F>
SolverResult solve_greedy(const F& f, std::uint64_t k) {
  SolverResult r{Combination(f.dimension()), 0.0, 0, SolverKind::greedy, 0};
  if (k == 0) {
    r.value = f(r.best);
    r.evaluations = 1;
    return r;
  }
  for (std::uint64_t step = 0; step < k; ++step) {
    auto kids = children(r.best);
    std::size_t arg = 0;
    double best = f(kids[0]);
    for (std::size_t i = 1; i < kids.size(); ++i) {
      const double v = f(kids[i]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    r.evaluations += kids.size();
    r.best = std::move(kids[arg]);
    r.value = best;
  }
  return r;
}

inline constexpr std::uint64_t kDefaultBruteCap = 50'000'000;

/// Exhaustive search over every combination with total <= k, visited in
/// lexicographic order; the first maximum wins, so ties resolve to the
/// lexicographically smallest combination. Throws CapExceededError before doing
/// any work if C(k + |N|, |N|) exceeds `cap`.
template <ValueFunction F>
SolverResult solve_brute(const F& f, std::uint64_t k, std::uint64_t cap = kDefaultBruteCap) {
  const std::size_t n = f.dimension();
  const auto required = feasible_count(k, n);
  if (required > cap) throw CapExceededError(required, cap);

  SolverResult r{Combination(n), 0.0, 0, SolverKind::brute, 0};
  Combination c(n);
  std::uint64_t total = 0;
  bool first = true;
  while (true) {
    const double v = f(c);
    ++r.evaluations;
    if (first || v > r.value) {
      r.value = v;
      r.best = c;
      first = false;
    }
    if (n == 0) break;
    // Lexicographic successor among {total <= k}.
    if (total < k) {
      ++c[n - 1];
      ++total;
      continue;
    }
    std::size_t i = n - 1;
    while (i > 0 && c[i] == 0) --i;
    if (i == 0) break;
    total -= c[i] - 1;
    c[i] = 0;
    ++c[i - 1];
  }
  return r;
}

struct GeneticParams {
  std::size_t population = 35;
  std::size_t generations = 1000;
  double crossover_probability = 0.9;
  std::optional<double> mutation_probability;  // per gene; default 1 / |N|
  std::size_t tournament_size = 3;
  std::size_t elite_count = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (population < 2) throw InvalidArgument("genetic population must be >= 2");
    if (generations < 1) throw InvalidArgument("genetic generations must be >= 1");
    if (elite_count >= population) throw InvalidArgument("elite count must be below the population size");
    if (tournament_size < 1) throw InvalidArgument("tournament size must be >= 1");
  }
};

struct GeneticTrace {
  std::vector<double> best_per_generation;  // best-ever fitness after each generation
};

// Random point with total <= k: draw s uniform in [0, k], then s single-unit
// increments on uniformly chosen slots.
inline Combination random_combination(std::size_t n, std::uint64_t k, Rng& rng) {
  Combination c(n);
  if (n == 0) return c;
  const auto s = rng.index(k + 1);
  for (std::uint64_t i = 0; i < s; ++i) ++c[static_cast<std::size_t>(rng.index(n))];
  return c;
}

/// Steady-budget genetic search: tournament selection, per-gene uniform
/// crossover, +-1 per-gene mutation clamped at 0, budget repair by random
/// decrements, elitism. No individual ever exceeds the budget. Returns the best
/// individual seen over the whole run (earliest wins ties).
template <ValueFunction F>
SolverResult solve_genetic(const F& f, std::uint64_t k, const GeneticParams& params,
                           GeneticTrace* trace = nullptr) {
  params.validate();
  const std::size_t n = f.dimension();
  const double mutation = params.mutation_probability.value_or(n ? 1.0 / static_cast<double>(n) : 0.0);
  Rng rng(params.seed);

  SolverResult r{Combination(n), 0.0, 0, SolverKind::genetic, params.seed};
  auto evaluate = [&](const Combination& c) {
    ++r.evaluations;
    return f(c);
  };

  std::vector<Combination> pop;
  std::vector<double> fit;
  pop.reserve(params.population);
  for (std::size_t i = 0; i < params.population; ++i) {
    pop.push_back(random_combination(n, k, rng));
    fit.push_back(evaluate(pop.back()));
  }
  std::size_t best0 = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (fit[i] > fit[best0]) best0 = i;
  r.best = pop[best0];
  r.value = fit[best0];

  auto tournament = [&]() -> std::size_t {
    std::size_t winner = static_cast<std::size_t>(rng.index(pop.size()));
    for (std::size_t t = 1; t < params.tournament_size; ++t) {
      const auto c = static_cast<std::size_t>(rng.index(pop.size()));
      if (fit[c] > fit[winner] || (fit[c] == fit[winner] && c < winner)) winner = c;
    }
    return winner;
  };

  std::vector<std::size_t> order(pop.size());
  std::vector<Combination> next;
  std::vector<double> next_fit;
  if (trace) trace->best_per_generation.reserve(params.generations);

  for (std::size_t g = 0; g < params.generations; ++g) {
    next.clear();
    next_fit.clear();

    // Elites: highest fitness first, lower index on ties.
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(params.elite_count),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        return fit[a] > fit[b] || (fit[a] == fit[b] && a < b);
                      });
    for (std::size_t e = 0; e < params.elite_count; ++e) {
      next.push_back(pop[order[e]]);
      next_fit.push_back(fit[order[e]]);
    }

    while (next.size() < params.population) {
      const auto& p1 = pop[tournament()];
      const auto& p2 = pop[tournament()];
      Combination child = p1;
      if (rng.bernoulli(params.crossover_probability))
        for (std::size_t i = 0; i < n; ++i)
          if (rng.bernoulli(0.5)) child[i] = p2[i];
      std::uint64_t total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.bernoulli(mutation)) {
          if (rng.bernoulli(0.5))
            ++child[i];
          else if (child[i] > 0)
            --child[i];
        }
        total += child[i];
      }
      while (total > k) {  // repair: drop a unit from a random positive gene
        std::size_t positive = 0;
        for (auto v : child) positive += v > 0;
        auto pick = rng.index(positive);
        for (std::size_t i = 0; i < n; ++i) {
          if (child[i] == 0) continue;
          if (pick-- == 0) {
            --child[i];
            break;
          }
        }
        --total;
      }
      next_fit.push_back(evaluate(child));
      next.push_back(std::move(child));
      if (next_fit.back() > r.value) {
        r.value = next_fit.back();
        r.best = next.back();
      }
    }
    pop.swap(next);
    fit.swap(next_fit);
    if (trace) trace->best_per_generation.push_back(r.value);
  }
  return r;
}

/// Random baseline: one random point within budget, evaluated once.
template <ValueFunction F>
SolverResult solve_random(const F& f, std::uint64_t k, std::uint64_t seed) {
  Rng rng(seed);
  SolverResult r{random_combination(f.dimension(), k, rng), 0.0, 1, SolverKind::random, seed};
  r.value = f(r.best);
  return r;
}

struct SolverOptions {
  std::uint64_t brute_cap = kDefaultBruteCap;
  GeneticParams genetic;
};

template <ValueFunction F>
SolverResult solve(SolverKind kind, const F& f, std::uint64_t k, const SolverOptions& options, std::uint64_t seed) {
  switch (kind) {
    case SolverKind::brute: return solve_brute(f, k, options.brute_cap);
    case SolverKind::greedy: return solve_greedy(f, k);
    case SolverKind::genetic: {
      auto p = options.genetic;
      p.seed = seed;
      return solve_genetic(f, k, p);
    }
    case SolverKind::random: return solve_random(f, k, seed);
  }
  throw InvalidArgument("unknown solver");
}

}  // namespace ocnc::solve
