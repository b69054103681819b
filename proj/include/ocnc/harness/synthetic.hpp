#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocnc/ads/advertisement.hpp"
#include "ocnc/core/combination.hpp"
#include "ocnc/core/concept_node.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"

namespace ocnc::harness {

// Interest phrases the generator attaches for each node; every phrase is
// classified to its node by the bundled article corpora.
inline const std::array<std::vector<std::string>, kNodeCount>& synthetic_phrases() {
  static const std::array<std::vector<std::string>, kNodeCount> phrases = {{
      {"movie stars", "hollywood actors", "pop singers", "famous musicians"},
      {"african american culture", "lgbt community", "black history", "ethnic heritage"},
      {"breaking news", "news media", "local newspapers", "television news"},
      {"nonprofit organizations", "police department", "veterans association", "charity"},
      {"election law", "2nd amendment", "gun rights", "voting rights"},
      {"church", "christian faith", "prayer", "islam"},
  }};
  return phrases;
}

/// Parameters of the synthetic ad generator.
///
/// Per ad: spend is 0 with probability `zero_spend_fraction`, else uniform in
/// [spend_min, spend_max]; days online uniform in [0, max_days]; each node count
/// uniform in [0, max_count]. The noiseless signal is w . [spend, days,
/// counts...] and clicks = max(0, round(signal + noise)) with Gaussian noise of
/// standard deviation `noise_sd`, or `noise_fraction` times the empirical signal
/// range when `noise_sd` is unset.
struct SyntheticSpec {
  std::size_t rows = 2000;
  std::vector<double> weights = {0.5, 1.0, 5.0, 2.0, 1.0, 6.0, 8.0, 2.0};
  std::optional<double> noise_sd;
  double noise_fraction = 0.1;
  std::uint64_t seed = 1;
  double zero_spend_fraction = 0.4;
  double spend_min = 500.0;
  double spend_max = 1000.0;
  std::int64_t max_days = 30;
  std::uint32_t max_count = 3;
  double missing_date_fraction = 0.0;  // such rows drop both dates

  void validate() const {
    if (rows < 10) throw InvalidArgument("synthetic row count must be >= 10");
    if (weights.size() != 2 + kNodeCount)
      throw InvalidArgument("synthetic weights need " + std::to_string(2 + kNodeCount) +
                            " entries: spend, days, then one per node");
    if (noise_sd && !(*noise_sd >= 0.0)) throw InvalidArgument("noise sd must be >= 0");
    if (!(noise_fraction >= 0.0)) throw InvalidArgument("noise fraction must be >= 0");
    if (!(spend_min >= 0.0 && spend_max >= spend_min)) throw InvalidArgument("bad spend range");
    if (max_days < 0) throw InvalidArgument("max_days must be >= 0");
  }
};

inline void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  s.rows = j.value("rows", s.rows);
  s.weights = j.value("weights", s.weights);
  if (j.contains("noise_sd") && !j["noise_sd"].is_null()) s.noise_sd = j["noise_sd"].get<double>();
  s.noise_fraction = j.value("noise_fraction", s.noise_fraction);
  s.seed = j.value("seed", s.seed);
  s.zero_spend_fraction = j.value("zero_spend_fraction", s.zero_spend_fraction);
  s.spend_min = j.value("spend_min", s.spend_min);
  s.spend_max = j.value("spend_max", s.spend_max);
  s.max_days = j.value("max_days", s.max_days);
  s.max_count = j.value("max_count", s.max_count);
  s.missing_date_fraction = j.value("missing_date_fraction", s.missing_date_fraction);
}

struct SyntheticData {
  std::vector<ads::Advertisement> ads;
  std::vector<Combination> counts;  // ground-truth node counts per ad
  std::vector<double> signal;       // noiseless w . x per ad
  double noise_sd = 0.0;            // the standard deviation actually used
  std::map<std::string, ConceptNode> interest_map;
};

inline double signal_range(const std::vector<double>& signal) {
  if (signal.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(signal.begin(), signal.end());
  return *hi - *lo;
}

inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng features(derive_seed(spec.seed, 0));
  Rng noise(derive_seed(spec.seed, 1));
  const auto& phrases = synthetic_phrases();
  const ads::Date base = *ads::Date::parse("2016-01-01");

  SyntheticData out;
  for (std::size_t n = 0; n < kNodeCount; ++n)
    for (const auto& p : phrases[n]) out.interest_map.emplace(p, kAllNodes[n]);

  std::vector<std::int64_t> days(spec.rows);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    ads::Advertisement ad;
    char id[32];
    std::snprintf(id, sizeof id, "s%05zu", r + 1);
    ad.id = id;
    ad.spend = features.bernoulli(spec.zero_spend_fraction)
                   ? 0.0
                   : std::round(features.uniform(spec.spend_min, spec.spend_max) * 100.0) / 100.0;
    days[r] = features.integer(0, spec.max_days);
    const auto start = base.plus_days(features.integer(0, 700));
    const bool dated = !features.bernoulli(spec.missing_date_fraction);
    if (dated) {
      ad.start_date = start;
      ad.end_date = start.plus_days(days[r]);
    }
    Combination c(kNodeCount);
    for (std::size_t n = 0; n < kNodeCount; ++n) {
      c[n] = static_cast<std::uint32_t>(features.integer(0, spec.max_count));
      for (std::uint32_t i = 0; i < c[n]; ++i)
        ad.interests.push_back(phrases[n][features.index(phrases[n].size())]);
    }
    features.shuffle(ad.interests);

    double s = spec.weights[0] * ad.spend + spec.weights[1] * static_cast<double>(days[r]);
    for (std::size_t n = 0; n < kNodeCount; ++n) s += spec.weights[2 + n] * c[n];
    out.signal.push_back(s);
    out.counts.push_back(std::move(c));
    out.ads.push_back(std::move(ad));
  }

  out.noise_sd = spec.noise_sd.value_or(spec.noise_fraction * signal_range(out.signal));
  for (std::size_t r = 0; r < spec.rows; ++r) {
    const double y = std::round(out.signal[r] + out.noise_sd * noise.normal());
    out.ads[r].clicks = y > 0.0 ? static_cast<std::uint64_t>(y) : 0;
  }
  return out;
}

}  // namespace ocnc::harness
