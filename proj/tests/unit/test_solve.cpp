#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/regress/model.hpp"
#include "ocnc/solve/solvers.hpp"
#include "ocnc/solve/value_function.hpp"

using namespace ocnc;
using namespace ocnc::solve;

namespace {

std::uint64_t total(const Combination& c) {
  std::uint64_t s = 0;
  for (auto v : c) s += v;
  return s;
}

// Deterministic pseudo-random table lookup: a value function with no structure.
FunctionValue hashed(std::size_t n, std::uint64_t seed) {
  return FunctionValue(n, [seed](const Combination& c) {
    std::uint64_t h = seed;
    for (auto v : c) h = derive_seed(h, v);
    return static_cast<double>(h % 1000) / 10.0;
  });
}

struct OracleBest {
  double value = 0;
  Combination best;
  std::uint64_t count = 0;
};

template <typename F>
OracleBest oracle_max(const F& f, std::size_t n, std::uint64_t k) {
  OracleBest o;
  bool first = true;
  oracle::for_each_combination(n, k, [&](const Combination& c) {
    const double x = f(c);
    ++o.count;
    if (first || x > o.value) {
      o.value = x;
      o.best = c;
      first = false;
    }
  });
  return o;
}

}  // namespace

TEST(FeasibleCount, MatchesBinomial) {
  for (std::uint64_t k = 0; k <= 12; ++k)
    for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(feasible_count(k, n), oracle::binomial(n + k, n));
  EXPECT_EQ(feasible_count(1'000'000, 40), std::numeric_limits<std::uint64_t>::max());
}

TEST(SolverNames, RoundTrip) {
  for (auto s : kAllSolvers) EXPECT_EQ(parse_solver(name_of(s)), s);
  EXPECT_THROW(parse_solver("annealing"), FormatError);
}

TEST(Greedy, ZeroBudget) {
  const LinearValue f({1, 2, 3});
  const auto r = solve_greedy(f, 0);
  EXPECT_EQ(r.best, Combination(3));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(Greedy, LinearConcentratesOnHeaviestNode) {
  const LinearValue f({1, 2, 3, 4, 5, 6});
  const auto r = solve_greedy(f, 3);
  EXPECT_EQ(r.best, (Combination{0, 0, 0, 0, 0, 3}));
  EXPECT_EQ(r.value, 18.0);
  EXPECT_EQ(r.evaluations, 18u);
}

TEST(Greedy, MyopicOnThreshold) {
  // Only a second unit on node 1 pays off; greedy never sees it coming.
  const FunctionValue f(2, [](const Combination& c) { return c[1] >= 2 ? 10.0 : static_cast<double>(c[0]); });
  const auto g = solve_greedy(f, 2);
  const auto b = solve_brute(f, 2);
  EXPECT_EQ(g.best, (Combination{2, 0}));
  EXPECT_EQ(b.best, (Combination{0, 2}));
  EXPECT_LT(g.value, b.value);
}

TEST(Greedy, InteractionExampleAgreesWithOracle) {
  const FunctionValue f(3, [](const Combination& c) { return double(c[0]) * c[1] + c[0]; });
  for (std::uint64_t k = 0; k <= 6; ++k) {
    const auto g = solve_greedy(f, k);
    EXPECT_LE(g.value, oracle_max(f, 3, k).value);
    EXPECT_EQ(total(g.best), k);
  }
}

TEST(Greedy, EvaluationCountIsBudgetTimesNodes) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::uint64_t k = 1; k <= 5; ++k) EXPECT_EQ(solve_greedy(hashed(n, 3), k).evaluations, k * n);
}

TEST(Greedy, ExactOnSeparableConcave) {
  // Sum of concave per-node gains: marginal gains only shrink, so greedy is optimal
  // provided spending is never harmful (increasing gains).
  for (std::uint64_t s = 1; s <= 30; ++s) {
    Rng rng(s);
    std::vector<double> a(4);
    for (auto& v : a) v = rng.uniform(0.1, 3);
    const FunctionValue f(4, [a](const Combination& c) {
      double v = 0;
      for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * std::sqrt(static_cast<double>(c[i]));
      return v;
    });
    for (std::uint64_t k = 0; k <= 6; ++k) EXPECT_NEAR(solve_greedy(f, k).value, solve_brute(f, k).value, 1e-12);
  }
}

TEST(Brute, EvaluationCountSmallExample) {
  const auto r = solve_brute(LinearValue({1, 1, 1}), 2);
  EXPECT_EQ(r.evaluations, 10u);
}

TEST(Brute, ConstantObjectivePicksZero) {
  const FunctionValue f(4, [](const Combination&) { return 2.5; });
  const auto r = solve_brute(f, 3);
  EXPECT_EQ(r.best, Combination(4));
  EXPECT_EQ(r.value, 2.5);
}

TEST(Brute, VisitsEachFeasiblePointOnce) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint64_t k = 0; k <= 6; ++k) {
      std::multiset<Combination> seen;
      const FunctionValue f(n, [&](const Combination& c) {
        seen.insert(c);
        return 0.0;
      });
      const auto r = solve_brute(f, k);
      EXPECT_EQ(r.evaluations, oracle::binomial(n + k, n));
      EXPECT_EQ(seen.size(), r.evaluations);
      EXPECT_EQ(std::set<Combination>(seen.begin(), seen.end()).size(), seen.size());
      for (const auto& c : seen) EXPECT_LE(total(c), k);
    }
}

TEST(Brute, CapExceededBeforeAnyWork) {
  std::size_t calls = 0;
  const FunctionValue f(6, [&](const Combination&) { return double(++calls); });
  EXPECT_THROW(solve_brute(f, 20, 1000), CapExceededError);
  EXPECT_EQ(calls, 0u);
  EXPECT_NO_THROW(solve_brute(f, 2, feasible_count(2, 6)));
}

TEST(Brute, AgreesWithOracle) {
  for (std::uint64_t s = 1; s <= 20; ++s)
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      const auto f = hashed(n, s);
      const std::uint64_t k = s % 6;
      const auto r = solve_brute(f, k);
      const auto o = oracle_max(f, n, k);
      EXPECT_EQ(r.value, o.value);
      EXPECT_EQ(r.best, o.best);
      EXPECT_EQ(r.evaluations, o.count);
    }
}

TEST(Genetic, ZeroBudget) {
  GeneticParams p;
  p.generations = 5;
  const auto r = solve_genetic(LinearValue({3, 1}), 0, p);
  EXPECT_EQ(r.best, Combination(2));
  EXPECT_EQ(r.value, 0.0);
}

TEST(Genetic, FindsLinearOptimum) {
  GeneticParams p;
  p.seed = 8;
  const LinearValue f({1, 4, 2, 3, 0.5, 1.5});
  const auto r = solve_genetic(f, 5, p);
  EXPECT_EQ(r.value, solve_brute(f, 5).value);
}

TEST(Genetic, DeterministicPerSeed) {
  const auto f = hashed(5, 2);
  GeneticParams p;
  p.generations = 50;
  p.seed = 17;
  const auto a = solve_genetic(f, 6, p);
  const auto b = solve_genetic(f, 6, p);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Genetic, TraceMonotoneAndFeasible) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    std::size_t worst_total = 0;
    const auto inner = hashed(4, s);
    const FunctionValue f(4, [&](const Combination& c) {
      worst_total = std::max<std::size_t>(worst_total, total(c));
      return inner(c);
    });
    GeneticParams p;
    p.generations = 100;
    p.seed = s;
    GeneticTrace trace;
    const auto r = solve_genetic(f, 7, p, &trace);
    ASSERT_EQ(trace.best_per_generation.size(), p.generations);
    for (std::size_t i = 1; i < trace.best_per_generation.size(); ++i)
      EXPECT_GE(trace.best_per_generation[i], trace.best_per_generation[i - 1]);
    EXPECT_EQ(trace.best_per_generation.back(), r.value);
    EXPECT_LE(worst_total, 7u);
    EXPECT_LE(total(r.best), 7u);
    EXPECT_EQ(f(r.best), r.value);
  }
}

TEST(Genetic, InvalidParametersRejected) {
  GeneticParams p;
  p.population = 1;
  EXPECT_THROW(solve_genetic(LinearValue({1}), 2, p), InvalidArgument);
  p = {};
  p.elite_count = p.population;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Random, FeasibleAndDeterministic) {
  const auto f = hashed(6, 1);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto a = solve_random(f, 4, s);
    EXPECT_LE(total(a.best), 4u);
    EXPECT_EQ(a.evaluations, 1u);
    EXPECT_EQ(a.best, solve_random(f, 4, s).best);
  }
}

TEST(Random, CoversWholeRange) {
  std::set<std::uint64_t> totals;
  Rng rng(4);
  for (int i = 0; i < 500; ++i) totals.insert(total(random_combination(3, 4, rng)));
  EXPECT_EQ(totals, (std::set<std::uint64_t>{0, 1, 2, 3, 4}));
}

TEST(Dominance, BruteBeatsEverySolverOnTreeModels) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    Rng rng(s);
    regress::Dataset d(ads::FeatureCase::A, 3);
    for (int i = 0; i < 60; ++i) {
      std::vector<double> x = {double(rng.index(5)), double(rng.index(5)), double(rng.index(5))};
      d.add(x, rng.uniform(0, 10));
    }
    regress::ForestParams fp;
    fp.n_trees = 10;
    const auto m = regress::fit_rfr(d, fp, s);
    const ModelValue f(m);
    const CachedValue cached(f);
    SolverOptions opt;
    opt.genetic.generations = 30;
    for (std::uint64_t k = 0; k <= 5; ++k) {
      const double best = solve_brute(cached, k).value;
      for (auto kind : kAllSolvers) EXPECT_GE(best, solve::solve(kind, cached, k, opt, s).value);
    }
  }
}

TEST(ModelValue, ContextWidthChecked) {
  regress::Dataset d(ads::FeatureCase::C, ads::dimension(ads::FeatureCase::C, 2));
  d.add(std::vector<double>{1, 2, 0, 1}, 1);
  d.add(std::vector<double>{2, 3, 1, 0}, 2);
  const auto m = regress::fit_dtr(d);
  EXPECT_THROW(ModelValue(m, {1.0}), InvalidArgument);
  const ModelValue f(m, {1.0, 2.0});
  EXPECT_EQ(f.dimension(), 2u);
  EXPECT_EQ(f(Combination{0, 1}), 1.0);
  EXPECT_THROW(f(Combination{0, 1, 2}), DimensionMismatchError);
}

TEST(CachedValue, EvaluatesEachPointOnce) {
  const LinearValue f({1, 2});
  const CountingValue counted(f);
  const CachedValue cached(counted);
  for (int i = 0; i < 3; ++i) solve_brute(cached, 4);
  EXPECT_EQ(counted.evaluations(), feasible_count(4, 2));
  EXPECT_EQ(cached.distinct_evaluations(), feasible_count(4, 2));
}
