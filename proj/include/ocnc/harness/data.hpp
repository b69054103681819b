#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ocnc/ads/ad_io.hpp"
#include "ocnc/ads/advertisement.hpp"
#include "ocnc/ads/features.hpp"
#include "ocnc/concepts/article_source.hpp"
#include "ocnc/concepts/classifier.hpp"
#include "ocnc/concepts/http_source.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/text.hpp"
#include "ocnc/harness/config.hpp"
#include "ocnc/harness/synthetic.hpp"
#include "ocnc/regress/dataset.hpp"

namespace ocnc::harness {

using InterestMap = std::map<std::string, ConceptNode, std::less<>>;

// Runs `fn`, rethrowing any library error as a StageError naming `stage`.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), std::current_exception());
  }
}

// Two columns, interest and node, with a header row.
inline InterestMap read_interest_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("interest map " + path.string());
  const auto rows = text::read_csv(in);
  if (rows.empty() || rows[0].size() < 2 || text::trim(rows[0][0]) != "interest" ||
      text::trim(rows[0][1]) != "node")
    throw FormatError(path.string() + ": header must be 'interest,node'");
  InterestMap map;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) throw RowError(r, "expected two columns");
    map[std::string(text::trim(rows[r][0]))] = parse_node(text::trim(rows[r][1]));
  }
  return map;
}

inline void write_interest_map(std::ostream& out, const InterestMap& map) {
  text::write_csv_row(out, {"interest", "node"});
  for (const auto& [interest, node] : map) text::write_csv_row(out, {interest, std::string(name_of(node))});
}

struct AdTable {
  std::vector<ads::Advertisement> ads;
  InterestMap interest_map;  // synthetic ground truth merged with the configured map
};

inline std::vector<ads::Advertisement> read_ads_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("input file " + path.string());
  return ads::parse_ads(in);
}

// The configured input, or synthetic data generated from the config.
inline AdTable load_ads(const ExperimentConfig& config) {
  return stage("ingest", [&] {
    AdTable t;
    if (config.input) {
      t.ads = read_ads_file(*config.input);
    } else {
      auto synth = generate_synthetic(config.synthetic);
      t.ads = std::move(synth.ads);
      t.interest_map.insert(synth.interest_map.begin(), synth.interest_map.end());
    }
    if (config.interest_map)
      for (auto& [k, v] : read_interest_map(*config.interest_map)) t.interest_map[k] = v;
    return t;
  });
}

inline std::unique_ptr<concepts::ArticleSource> open_article_source(const CorpusConfig& corpus) {
  if (corpus.source == CorpusConfig::Source::http)
    return std::make_unique<concepts::HttpSource>(concepts::HttpSourceConfig::from_json(corpus.http));
  return std::make_unique<concepts::FixtureSource>(corpus.path);
}

/// Interest-to-node mapping for a run: explicit map entries first, similarity
/// classification for everything else. Scorers are only built (and the article
/// source only contacted) when some interest is not covered by the map.
class InterestMapper {
 public:
  InterestMapper(const ExperimentConfig& config, InterestMap map, std::span<const ads::Advertisement> ads)
      : nodes_(config.nodes), map_(std::move(map)) {
    bool need_scorers = false;
    for (const auto& ad : ads)
      for (const auto& i : ad.interests)
        if (!map_.contains(i) && !concepts::tokenize(i).empty()) need_scorers = true;
    if (!need_scorers) return;

    auto source = open_article_source(config.corpus);
    concepts::CachingSource cached(*source);
    std::vector<std::shared_ptr<const concepts::SimilarityModel>> models;
    for (auto node : nodes_) {
      auto root = config.corpus.roots.find(node);
      if (root == config.corpus.roots.end())
        throw InvalidArgument("no corpus root configured for node '" + std::string(name_of(node)) + "'");
      const auto titles = concepts::collect_titles(cached, {root->second, config.corpus.depth});
      for (const auto& t : titles.titles) titles_.emplace_back(node, t);
      models.push_back(std::make_shared<const concepts::ConceptScorer>(
          node, concepts::build_corpus(cached, titles.titles)));
    }
    classifier_.emplace(std::move(models));
  }

  const std::vector<ConceptNode>& nodes() const noexcept { return nodes_; }

  // (node, title) pairs of every article that went into a corpus.
  const std::vector<std::pair<ConceptNode, std::string>>& corpus_titles() const noexcept { return titles_; }

  // Interests mapped to a node outside the configured list are skipped.
  concepts::NodeCounts count_nodes(const ads::Advertisement& ad) const {
    concepts::NodeCounts out{Combination(nodes_.size()), {}};
    for (const auto& interest : ad.interests) {
      std::optional<ConceptNode> node;
      if (auto it = map_.find(interest); it != map_.end())
        node = it->second;
      else if (classifier_ && !concepts::tokenize(interest).empty())
        node = classifier_->classify(interest);
      const auto slot = node ? std::find(nodes_.begin(), nodes_.end(), *node) : nodes_.end();
      if (slot == nodes_.end()) {
        out.skipped.push_back(interest);
        continue;
      }
      ++out.counts[static_cast<std::size_t>(slot - nodes_.begin())];
    }
    return out;
  }

 private:
  std::vector<ConceptNode> nodes_;
  InterestMap map_;
  std::optional<concepts::ConceptClassifier> classifier_;
  std::vector<std::pair<ConceptNode, std::string>> titles_;
};

struct MappedAds {
  std::vector<ads::Advertisement> ads;
  std::vector<ConceptNode> nodes;
  std::vector<concepts::NodeCounts> counts;  // parallel to ads
  std::vector<std::pair<ConceptNode, std::string>> corpus_titles;

  std::vector<Combination> combinations() const {
    std::vector<Combination> out;
    out.reserve(counts.size());
    for (const auto& c : counts) out.push_back(c.counts);
    return out;
  }
};

inline MappedAds load_and_map(const ExperimentConfig& config) {
  auto table = load_ads(config);
  return stage("map", [&] {
    InterestMapper mapper(config, std::move(table.interest_map), table.ads);
    MappedAds m{std::move(table.ads), mapper.nodes(), {}, mapper.corpus_titles()};
    m.counts.reserve(m.ads.size());
    for (const auto& ad : m.ads) m.counts.push_back(mapper.count_nodes(ad));
    return m;
  });
}

struct LabeledDataset {
  regress::Dataset data;
  std::vector<std::string> ids;  // row i came from the ad with ids[i]
};

// Rows that cannot be vectorized for the case (undated ads under Case C) are dropped.
inline LabeledDataset build_dataset(const MappedAds& m, ads::FeatureCase feature_case) {
  return stage("vectorize", [&] {
    LabeledDataset out{regress::Dataset(feature_case, ads::dimension(feature_case, m.nodes.size())), {}};
    for (std::size_t i = 0; i < m.ads.size(); ++i) {
      auto fv = ads::vectorize(m.ads[i], m.counts[i].counts, feature_case);
      if (!fv) continue;
      out.data.add(fv->values, static_cast<double>(m.ads[i].clicks));
      out.ids.push_back(m.ads[i].id);
    }
    if (out.data.empty()) throw InvalidArgument("no advertisement can be vectorized for this case");
    return out;
  });
}

}  // namespace ocnc::harness
