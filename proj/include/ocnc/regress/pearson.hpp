#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "ocnc/core/error.hpp"

namespace ocnc::regress {

// Sample Pearson correlation, clamped to [-1, 1].
inline double pearson(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) throw InvalidArgument("pearson: length mismatch");
  const std::size_t n = y.size();
  if (n < 2) throw UndefinedCorrelationError("pearson needs at least two pairs");
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(y) || constant(y_hat)) throw UndefinedCorrelationError("pearson undefined: zero variance");
  double my = 0.0, mh = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    my += y[i];
    mh += y_hat[i];
  }
  my /= static_cast<double>(n);
  mh /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = y[i] - my;
    const double b = y_hat[i] - mh;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

}  // namespace ocnc::regress
