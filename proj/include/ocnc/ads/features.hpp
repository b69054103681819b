#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocnc/ads/advertisement.hpp"
#include "ocnc/core/combination.hpp"
#include "ocnc/core/error.hpp"

namespace ocnc::ads {

// A: node counts. B: spend then counts. C: spend, days online, then counts.
enum class FeatureCase { A, B, C };

constexpr std::size_t context_width(FeatureCase c) noexcept {
  return c == FeatureCase::A ? 0 : c == FeatureCase::B ? 1 : 2;
}

constexpr std::size_t dimension(FeatureCase c, std::size_t node_count) noexcept {
  return context_width(c) + node_count;
}

constexpr char case_tag(FeatureCase c) noexcept {
  return c == FeatureCase::A ? 'A' : c == FeatureCase::B ? 'B' : 'C';
}

inline FeatureCase parse_case(std::string_view s) {
  if (s == "A" || s == "a") return FeatureCase::A;
  if (s == "B" || s == "b") return FeatureCase::B;
  if (s == "C" || s == "c") return FeatureCase::C;
  throw FormatError("unknown feature case '" + std::string(s) + "'");
}

struct FeatureVector {
  FeatureCase feature_case = FeatureCase::A;
  std::vector<double> values;
};

// Builds [spend][days_online][counts...] according to the case. Returns nullopt
// for Case C when the ad lacks a date (the row is excluded from Case C runs).
inline std::optional<FeatureVector> vectorize(const Advertisement& ad, const Combination& counts,
                                              FeatureCase feature_case) {
  FeatureVector fv{feature_case, {}};
  fv.values.reserve(dimension(feature_case, counts.size()));
  if (feature_case != FeatureCase::A) fv.values.push_back(ad.spend);
  if (feature_case == FeatureCase::C) {
    const auto days = days_online(ad);
    if (!days) return std::nullopt;
    fv.values.push_back(static_cast<double>(*days));
  }
  for (auto c : counts) fv.values.push_back(static_cast<double>(c));
  return fv;
}

}  // namespace ocnc::ads
