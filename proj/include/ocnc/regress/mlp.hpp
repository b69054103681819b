#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/regress/dataset.hpp"

namespace ocnc::regress {

struct MlpParams {
  std::size_t hidden_units = 100;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One-hidden-layer perceptron regressor: d -> h (ReLU) -> 1 (linear).
///
/// Inputs are standardized with constants taken from the training set. The
/// parameters live in one flat vector laid out as [W1 (h x d, row-major), b1 (h),
/// w2 (h), b2] so optimizers and gradient checks can treat them uniformly.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::size_t inputs, std::size_t hidden, std::vector<double> params, std::vector<double> mean,
      std::vector<double> scale)
      : in_(inputs), hidden_(hidden), params_(std::move(params)), mean_(std::move(mean)),
        scale_(std::move(scale)) {
    if (params_.size() != parameter_count(in_, hidden_) || mean_.size() != in_ || scale_.size() != in_)
      throw FormatError("malformed perceptron parameters");
  }

  static constexpr std::size_t parameter_count(std::size_t d, std::size_t h) { return h * d + 2 * h + 1; }

  std::size_t inputs() const noexcept { return in_; }
  std::size_t hidden_units() const noexcept { return hidden_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> feature_mean() const noexcept { return mean_; }
  std::span<const double> feature_scale() const noexcept { return scale_; }

  // Network output for an already standardized input.
  double forward(std::span<const double> z) const {
    const double* w1 = params_.data();
    const double* b1 = w1 + hidden_ * in_;
    const double* w2 = b1 + hidden_;
    double out = w2[hidden_];
    for (std::size_t j = 0; j < hidden_; ++j) {
      double a = b1[j];
      const double* row = w1 + j * in_;
      for (std::size_t k = 0; k < in_; ++k) a += row[k] * z[k];
      if (a > 0.0) out += w2[j] * a;
    }
    return out;
  }

  double predict(std::span<const double> x) const {
    std::vector<double> z(in_);
    for (std::size_t k = 0; k < in_; ++k) z[k] = (x[k] - mean_[k]) / scale_[k];
    return forward(z);
  }

  /// Loss 0.5 * mean((out - y)^2) over `rows` standardized inputs in `z`
  /// (row-major); its gradient w.r.t. the parameters is written to `grad`.
  double loss_and_gradient(std::span<const double> z, std::span<const double> y, std::span<double> grad) const {
    const std::size_t rows = y.size();
    std::fill(grad.begin(), grad.end(), 0.0);
    const double* w1 = params_.data();
    const double* b1 = w1 + hidden_ * in_;
    const double* w2 = b1 + hidden_;
    double* g_w1 = grad.data();
    double* g_b1 = g_w1 + hidden_ * in_;
    double* g_w2 = g_b1 + hidden_;
    double& g_b2 = g_w2[hidden_];

    std::vector<double> act(hidden_);
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* x = z.data() + r * in_;
      double out = w2[hidden_];
      for (std::size_t j = 0; j < hidden_; ++j) {
        double a = b1[j];
        const double* row = w1 + j * in_;
        for (std::size_t k = 0; k < in_; ++k) a += row[k] * x[k];
        act[j] = a > 0.0 ? a : 0.0;
        out += w2[j] * act[j];
      }
      const double err = out - y[r];
      loss += 0.5 * err * err * inv;
      const double delta = err * inv;
      g_b2 += delta;
      for (std::size_t j = 0; j < hidden_; ++j) {
        if (act[j] <= 0.0) continue;
        g_w2[j] += delta * act[j];
        const double gz = delta * w2[j];
        g_b1[j] += gz;
        double* g_row = g_w1 + j * in_;
        for (std::size_t k = 0; k < in_; ++k) g_row[k] += gz * x[k];
      }
    }
    return loss;
  }

  /// Adam on shuffled minibatches. Throws DivergenceError (1-based epoch) if the
  /// epoch's loss is not finite.
  static Mlp fit(const Dataset& data, const MlpParams& p, std::uint64_t seed) {
    if (p.hidden_units < 1 || p.epochs < 1 || p.batch_size < 1)
      throw InvalidArgument("perceptron needs hidden_units, epochs and batch_size >= 1");
    if (data.empty()) throw InvalidArgument("cannot fit on an empty dataset");
    const std::size_t d = data.dimension();
    const std::size_t m = data.rows();

    std::vector<double> mean(d, 0.0), scale(d, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < d; ++k) mean[k] += data.feature(i, k);
    for (auto& v : mean) v /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const double c = data.feature(i, k) - mean[k];
        scale[k] += c * c;
      }
    for (auto& v : scale) {
      v = std::sqrt(v / static_cast<double>(m));
      if (!(v > 0.0)) v = 1.0;  // constant column
    }
    std::vector<double> z(m * d);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < d; ++k) z[i * d + k] = (data.feature(i, k) - mean[k]) / scale[k];

    Mlp net(d, p.hidden_units, initial_parameters(d, p.hidden_units, derive_seed(seed, 0)),
            std::move(mean), std::move(scale));

    const std::size_t n_params = net.params_.size();
    std::vector<double> grad(n_params), m1(n_params, 0.0), m2(n_params, 0.0);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(seed, 1));
    const std::size_t batch = std::min(p.batch_size, m);
    std::vector<double> bz(batch * d), by(batch);
    std::uint64_t step = 0;

    for (std::size_t epoch = 1; epoch <= p.epochs; ++epoch) {
      shuffle_rng.shuffle(order);
      double epoch_loss = 0.0;
      for (std::size_t start = 0; start < m; start += batch) {
        const std::size_t n = std::min(batch, m - start);
        for (std::size_t r = 0; r < n; ++r) {
          const auto src = order[start + r];
          std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(src * d), d,
                      bz.begin() + static_cast<std::ptrdiff_t>(r * d));
          by[r] = data.target(src);
        }
        const double loss = net.loss_and_gradient(std::span(bz).first(n * d), std::span(by).first(n), grad);
        epoch_loss += loss * static_cast<double>(n);
        ++step;
        const double c1 = 1.0 - std::pow(p.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(p.beta2, static_cast<double>(step));
        const double lr = p.learning_rate * std::sqrt(c2) / c1;
        for (std::size_t i = 0; i < n_params; ++i) {
          m1[i] = p.beta1 * m1[i] + (1.0 - p.beta1) * grad[i];
          m2[i] = p.beta2 * m2[i] + (1.0 - p.beta2) * grad[i] * grad[i];
          net.params_[i] -= lr * m1[i] / (std::sqrt(m2[i]) + p.epsilon);
        }
      }
      if (!std::isfinite(epoch_loss)) throw DivergenceError(epoch);
    }
    return net;
  }

  // Uniform in +-1/sqrt(fan_in) for every weight and bias of a layer.
  static std::vector<double> initial_parameters(std::size_t d, std::size_t h, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> params(parameter_count(d, h));
    const double b_in = 1.0 / std::sqrt(static_cast<double>(d));
    const double b_hidden = 1.0 / std::sqrt(static_cast<double>(h));
    for (std::size_t i = 0; i < h * d + h; ++i) params[i] = rng.uniform(-b_in, b_in);
    for (std::size_t i = h * d + h; i < params.size(); ++i) params[i] = rng.uniform(-b_hidden, b_hidden);
    return params;
  }

  nlohmann::json to_json() const {
    return {{"inputs", in_}, {"hidden_units", hidden_}, {"parameters", params_},
            {"feature_mean", mean_}, {"feature_scale", scale_}};
  }

  static Mlp from_json(const nlohmann::json& j) {
    return Mlp(j.at("inputs").get<std::size_t>(), j.at("hidden_units").get<std::size_t>(),
               j.at("parameters").get<std::vector<double>>(), j.at("feature_mean").get<std::vector<double>>(),
               j.at("feature_scale").get<std::vector<double>>());
  }

 private:
  std::size_t in_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

}  // namespace ocnc::regress
