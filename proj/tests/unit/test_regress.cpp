#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ocnc/core/rng.hpp"
#include "ocnc/regress/model.hpp"
#include "ocnc/regress/pearson.hpp"

using namespace ocnc;
using namespace ocnc::regress;

namespace {

Dataset make(std::vector<std::vector<double>> xs, std::vector<double> ys) {
  Dataset d(ads::FeatureCase::A, xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i) d.add(xs[i], ys[i]);
  return d;
}

Dataset noisy_linear(std::uint64_t seed, std::size_t rows, std::size_t dim, bool integer_features = false) {
  Rng rng(seed);
  Dataset d(ads::FeatureCase::A, dim);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < rows; ++i) {
    double y = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      x[j] = integer_features ? static_cast<double>(rng.index(4)) : rng.uniform(-2, 2);
      y += (static_cast<double>(j) + 1.0) * x[j];
    }
    d.add(x, y + rng.normal());
  }
  return d;
}

}  // namespace

TEST(Split, SizesAndDisjointness) {
  Dataset d(ads::FeatureCase::A, 1);
  for (int i = 0; i < 100; ++i) d.add(std::vector<double>{static_cast<double>(i)}, i);
  const auto [train, test] = split(d, 0.95, 3);
  EXPECT_EQ(train.rows(), 95u);
  EXPECT_EQ(test.rows(), 5u);
  std::set<double> seen;
  for (std::size_t i = 0; i < train.rows(); ++i) seen.insert(train.target(i));
  for (std::size_t i = 0; i < test.rows(); ++i) seen.insert(test.target(i));
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Split, MinimalAndDeterministic) {
  const auto d = make({{0}, {1}}, {0, 1});
  const auto [a, b] = split(d, 0.5, 1);
  EXPECT_EQ(a.rows(), 1u);
  EXPECT_EQ(b.rows(), 1u);
  const auto [i1, t1] = split_indices(50, 0.8, 9);
  const auto [i2, t2] = split_indices(50, 0.8, 9);
  EXPECT_EQ(i1, i2);
  EXPECT_EQ(t1, t2);
}

TEST(Split, DegenerateRejected) {
  const auto d = make({{0}, {1}}, {0, 1});
  EXPECT_THROW(split(d, 0.99, 1), InvalidArgument);
  EXPECT_THROW(split(d, 1.0, 1), InvalidArgument);
  EXPECT_THROW(split(make({{0}}, {0}), 0.5, 1), InvalidArgument);
}

TEST(Dtr, PerfectFitOnTwoPoints) {
  const auto m = fit_dtr(make({{0}, {1}}, {1, 3}));
  EXPECT_EQ(m.predict(std::vector<double>{0}), 1.0);
  EXPECT_EQ(m.predict(std::vector<double>{1}), 3.0);
}

TEST(Dtr, ConstantTargetsSingleLeaf) {
  Rng rng(1);
  const auto d = make({{0}, {1}, {2}, {5}}, {7, 7, 7, 7});
  const auto t = RegressionTree::fit(d, TreeParams{}, rng);
  EXPECT_EQ(t.leaf_count(), 1u);
  EXPECT_EQ(t.predict(std::vector<double>{3}), 7.0);
}

TEST(Dtr, DepthOneSplitAtOnePointFive) {
  Rng rng(1);
  const auto d = make({{0}, {1}, {2}}, {0, 0, 10});
  const auto t = RegressionTree::fit(d, TreeParams{1, 0}, rng);
  ASSERT_EQ(t.nodes().size(), 3u);
  EXPECT_EQ(t.nodes()[0].feature, 0);
  EXPECT_EQ(t.nodes()[0].threshold, 1.5);
  EXPECT_EQ(t.predict(std::vector<double>{0.5}), 0.0);
  EXPECT_EQ(t.predict(std::vector<double>{2}), 10.0);
}

TEST(Dtr, FeatureTieBrokenByLowestIndex) {
  Rng rng(1);
  const auto d = make({{0, 0}, {1, 1}}, {0, 1});
  const auto t = RegressionTree::fit(d, TreeParams{1, 0}, rng);
  EXPECT_EQ(t.nodes()[0].feature, 0);
}

TEST(Dtr, ZeroTrainingErrorOnDistinctRows) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto d = noisy_linear(s, 80, 3);
    const auto m = fit_dtr(d, {}, s);
    for (std::size_t i = 0; i < d.rows(); ++i) EXPECT_EQ(m.predict(d.row(i)), d.target(i));
  }
}

TEST(Dtr, MaxDepthRespected) {
  const auto d = noisy_linear(2, 200, 3);
  Rng rng(1);
  for (std::size_t depth : {1u, 2u, 4u}) EXPECT_LE(RegressionTree::fit(d, TreeParams{depth, 0}, rng).depth(), depth);
}

TEST(Rfr, SingleTreeWithoutBootstrapEqualsDtr) {
  const auto d = noisy_linear(5, 120, 4);
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.max_features = 4;
  const auto forest = fit_rfr(d, p, 11);
  const auto tree = fit_dtr(d, {}, 11);
  const auto probe = noisy_linear(6, 50, 4);
  for (std::size_t i = 0; i < probe.rows(); ++i) EXPECT_EQ(forest.predict(probe.row(i)), tree.predict(probe.row(i)));
}

TEST(Rfr, FeatureSubsetRule) {
  ForestParams p;
  EXPECT_EQ(p.features_per_split(6), 2u);
  EXPECT_EQ(p.features_per_split(8), 2u);
  EXPECT_EQ(p.features_per_split(2), 1u);
  EXPECT_EQ(p.features_per_split(9), 3u);
}

class BoundedModels : public ::testing::TestWithParam<ModelKind> {};

TEST_P(BoundedModels, PredictionsWithinTargetRange) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto d = noisy_linear(s, 150, 3);
    ModelConfig cfg;
    cfg.rfr.n_trees = 20;
    const auto m = fit_model(GetParam(), d, cfg, s);
    const auto [lo, hi] = d.target_range();
    const auto probe = noisy_linear(s + 100, 100, 3);
    for (std::size_t i = 0; i < probe.rows(); ++i) {
      std::vector<double> x(probe.row(i).begin(), probe.row(i).end());
      for (auto& v : x) v *= 3;  // also outside the training box
      const double y = m.predict(x);
      EXPECT_GE(y, lo);
      EXPECT_LE(y, hi);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Trees, BoundedModels, ::testing::Values(ModelKind::dtr, ModelKind::rfr, ModelKind::abr));

class AllModels : public ::testing::TestWithParam<ModelKind> {};

TEST_P(AllModels, DeterministicAndSerializable) {
  const auto d = noisy_linear(3, 120, 4, true);
  ModelConfig cfg;
  cfg.rfr.n_trees = 10;
  cfg.mlp.epochs = 20;
  const auto a = fit_model(GetParam(), d, cfg, 99);
  const auto b = fit_model(GetParam(), d, cfg, 99);
  const auto restored = TrainedModel::from_json(nlohmann::json::parse(a.to_json().dump()));
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(restored.to_json(), a.to_json());
  EXPECT_EQ(restored.kind(), GetParam());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    EXPECT_EQ(a.predict(d.row(i)), b.predict(d.row(i)));
    EXPECT_EQ(a.predict(d.row(i)), restored.predict(d.row(i)));
  }
}

TEST_P(AllModels, DimensionChecked) {
  const auto d = noisy_linear(3, 40, 2);
  ModelConfig cfg;
  cfg.rfr.n_trees = 2;
  cfg.abr.n_estimators = 2;
  cfg.mlp.epochs = 1;
  const auto m = fit_model(GetParam(), d, cfg, 1);
  EXPECT_THROW(m.predict(std::vector<double>{1, 2, 3}), DimensionMismatchError);
}

INSTANTIATE_TEST_SUITE_P(Kinds, AllModels,
                         ::testing::Values(ModelKind::abr, ModelKind::dtr, ModelKind::mlp, ModelKind::rfr),
                         [](const auto& info) { return std::string(name_of(info.param)); });

TEST(ModelFile, RejectsForeignJson) {
  EXPECT_THROW(TrainedModel::from_json(nlohmann::json{{"format", "other"}}), FormatError);
  EXPECT_THROW(TrainedModel::from_json(nlohmann::json::object()), FormatError);
}

TEST(ModelKindNames, ParseCaseInsensitive) {
  EXPECT_EQ(parse_model_kind("rfr"), ModelKind::rfr);
  EXPECT_EQ(parse_model_kind("ABR"), ModelKind::abr);
  EXPECT_THROW(parse_model_kind("svm"), FormatError);
}

TEST(Abr, OneRoundHandTrace) {
  const auto d = make({{0}, {1}, {2}}, {0, 10, 20});
  const std::vector<double> w(3, 1.0 / 3.0);
  const std::vector<std::size_t> resample = {0, 0, 1};
  Rng rng(1);
  const auto r = boost_round(d, w, resample, AdaBoostParams{}, rng);
  // The tree sees x = 0, 0, 1 and predicts 0, 10, 10: losses 0, 0, 10 -> 0, 0, 1.
  EXPECT_EQ(r.losses, (std::vector<double>{0, 0, 1}));
  EXPECT_DOUBLE_EQ(r.average_loss, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.beta, 0.5);
  EXPECT_DOUBLE_EQ(r.next_weights[0], 0.25);
  EXPECT_DOUBLE_EQ(r.next_weights[1], 0.25);
  EXPECT_DOUBLE_EQ(r.next_weights[2], 0.5);
}

TEST(Abr, PerfectFitReturnsEarly) {
  const auto d = make({{0}, {1}, {2}}, {4, 4, 4});
  const auto m = AdaBoostR2::fit(d, {}, 4);
  EXPECT_EQ(m.trees().size(), 1u);
  EXPECT_EQ(m.predict(std::vector<double>{1}), 4.0);
}

TEST(Abr, FirstRoundAtHalfLossKeepsLoneTree) {
  // Any resample of two rows that misses one of them leaves average loss 0.5.
  const auto d = make({{0}, {1}}, {5, 9});
  for (std::uint64_t s = 0; s < 10; ++s) EXPECT_GE(AdaBoostR2::fit(d, {}, s).trees().size(), 1u);
}

TEST(Abr, WeightedMedian) {
  EXPECT_EQ(AdaBoostR2::weighted_median({{1, 1}, {2, 1}, {3, 1}}), 2.0);
  EXPECT_EQ(AdaBoostR2::weighted_median({{1, 5}, {2, 1}, {3, 1}}), 1.0);
  EXPECT_EQ(AdaBoostR2::weighted_median({{3, 1}, {1, 1}, {2, 3}}), 2.0);
}

TEST(Abr, ResampleFollowsWeights) {
  Rng rng(2);
  const std::vector<double> w = {0.0, 1.0, 0.0};
  for (auto i : weighted_resample(w, rng)) EXPECT_EQ(i, 1u);
}

TEST(Mlp, SmokeOneEpochOnFourRows) {
  const auto d = make({{0, 1}, {1, 0}, {1, 1}, {2, 2}}, {1, 2, 3, 4});
  MlpParams p;
  p.epochs = 1;
  EXPECT_NO_THROW(fit_mlp(d, p, 1));
}

TEST(Mlp, StandardizationIdentity) {
  const auto d = noisy_linear(4, 300, 3);
  MlpParams p;
  p.epochs = 1;
  const auto net = Mlp::fit(d, p, 1);
  for (std::size_t j = 0; j < 3; ++j) {
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const double z = (d.feature(i, j) - net.feature_mean()[j]) / net.feature_scale()[j];
      s += z;
      s2 += z * z;
    }
    EXPECT_NEAR(s / d.rows(), 0.0, 1e-12);
    EXPECT_NEAR(s2 / d.rows(), 1.0, 1e-12);
  }
}

TEST(Mlp, ConstantColumnDoesNotBreakStandardization) {
  const auto d = make({{1, 0}, {1, 1}, {1, 2}, {1, 3}}, {0, 1, 2, 3});
  MlpParams p;
  p.epochs = 5;
  const auto m = fit_mlp(d, p, 1);
  EXPECT_TRUE(std::isfinite(m.predict(std::vector<double>{1, 1})));
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    Rng rng(s);
    const std::size_t d = 1 + rng.index(4), h = 1 + rng.index(5), rows = 1 + rng.index(6);
    Mlp net(d, h, Mlp::initial_parameters(d, h, s), std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
    std::vector<double> z(rows * d), y(rows);
    for (auto& v : z) v = rng.uniform(-2, 2);
    for (auto& v : y) v = rng.uniform(-3, 3);
    std::vector<double> grad(net.parameters().size()), scratch(grad.size());
    net.loss_and_gradient(z, y, grad);
    for (std::size_t p = 0; p < grad.size(); ++p) {
      const double orig = net.parameters()[p];
      constexpr double step = 1e-5;
      net.parameters()[p] = orig + step;
      const double up = net.loss_and_gradient(z, y, scratch);
      net.parameters()[p] = orig - step;
      const double down = net.loss_and_gradient(z, y, scratch);
      net.parameters()[p] = orig;
      const double numeric = (up - down) / (2 * step);
      const double scale = std::max(std::abs(numeric), std::abs(grad[p]));
      if (scale > 1e-10) {
        EXPECT_LE(std::abs(numeric - grad[p]) / scale, 1e-4) << "seed " << s << " param " << p;
      }
    }
  }
}

TEST(Mlp, LearnsLinearFunction) {
  Rng rng(3);
  Dataset train(ads::FeatureCase::A, 1), test(ads::FeatureCase::A, 1);
  for (int i = 0; i < 400; ++i) {
    const double x = rng.uniform(-5, 5);
    (i < 320 ? train : test).add(std::vector<double>{x}, 2 * x);
  }
  const auto m = fit_mlp(train, {}, 7);
  double mse = 0, mean = 0, var = 0;
  for (std::size_t i = 0; i < test.rows(); ++i) mean += test.target(i) / test.rows();
  for (std::size_t i = 0; i < test.rows(); ++i) {
    mse += std::pow(m.predict(test.row(i)) - test.target(i), 2) / test.rows();
    var += std::pow(test.target(i) - mean, 2) / test.rows();
  }
  EXPECT_LT(mse, var);
  EXPECT_LT(mse, 0.05 * var);
}

TEST(Mlp, DivergenceReportsEpoch) {
  const auto d = make({{0}, {1}, {2}, {3}}, {0, 1e200, -1e200, 1e200});
  MlpParams p;
  p.epochs = 3;
  try {
    Mlp::fit(d, p, 1);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.epoch(), 1u);
  }
}

TEST(Pearson, Identities) {
  const std::vector<double> y = {1, 2, 3};
  EXPECT_NEAR(pearson(y, y), 1.0, 1e-12);
  EXPECT_NEAR(pearson(y, std::vector<double>{3, 2, 1}), -1.0, 1e-12);
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}), 0.8, 1e-12);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), UndefinedCorrelationError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), UndefinedCorrelationError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST(Pearson, AffineInvarianceAndSymmetry) {
  for (std::uint64_t s = 1; s <= 50; ++s) {
    Rng rng(s);
    const std::size_t n = 2 + rng.index(30);
    std::vector<double> y(n), yh(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform(-10, 10);
      yh[i] = y[i] + rng.normal() * 5;
    }
    const double r = pearson(y, yh);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    EXPECT_NEAR(pearson(yh, y), r, 1e-12);
    for (double a : {-3.5, 0.25, 7.0}) {
      std::vector<double> t(n);
      for (std::size_t i = 0; i < n; ++i) t[i] = a * y[i] + 4.0;
      EXPECT_NEAR(pearson(t, yh), (a > 0 ? 1 : -1) * r, 1e-9);
    }
  }
}
