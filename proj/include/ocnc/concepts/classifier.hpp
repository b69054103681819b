#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ocnc/ads/advertisement.hpp"
#include "ocnc/concepts/scorer.hpp"
#include "ocnc/concepts/scraper.hpp"
#include "ocnc/core/combination.hpp"
#include "ocnc/core/concept_node.hpp"
#include "ocnc/core/error.hpp"

namespace ocnc::concepts {

struct NodeCounts {
  Combination counts;                // slot order = ConceptClassifier::nodes()
  std::vector<std::string> skipped;  // interests that could not be classified
};

/// Maps interest phrases to conceptual nodes by highest similarity.
///
/// Holds one model per node; the node list is kept in canonical order, which
/// is also name order, so "first maximum wins" is the lexicographic tie-break.
/// An optional override table assigns specific phrases directly.
class ConceptClassifier {
 public:
  explicit ConceptClassifier(std::vector<std::shared_ptr<const SimilarityModel>> models)
      : models_(std::move(models)) {
    if (models_.empty()) throw InvalidArgument("classifier needs at least one concept model");
    std::sort(models_.begin(), models_.end(), [](const auto& a, const auto& b) {
      return index_of(a->concept_node()) < index_of(b->concept_node());
    });
    for (std::size_t i = 1; i < models_.size(); ++i)
      if (models_[i]->concept_node() == models_[i - 1]->concept_node())
        throw InvalidArgument("two models for node '" +
                              std::string(name_of(models_[i]->concept_node())) + "'");
    for (const auto& m : models_) nodes_.push_back(m->concept_node());
  }

  const std::vector<ConceptNode>& nodes() const noexcept { return nodes_; }

  void set_override(std::string interest, ConceptNode node) {
    if (std::find(nodes_.begin(), nodes_.end(), node) == nodes_.end())
      throw InvalidArgument("override targets node '" + std::string(name_of(node)) +
                            "' which the classifier does not model");
    overrides_[std::move(interest)] = node;
  }

  ConceptNode classify(std::string_view interest) const {
    if (auto it = overrides_.find(std::string(interest)); it != overrides_.end()) return it->second;
    std::size_t best = 0;
    double best_score = models_[0]->similarity(interest);
    for (std::size_t i = 1; i < models_.size(); ++i) {
      const double s = models_[i]->similarity(interest);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    return nodes_[best];
  }

  // Every interest is classified independently; phrases without tokens are
  // recorded in `skipped`, so total() + skipped.size() == interests.size().
  NodeCounts count_nodes(const ads::Advertisement& ad) const {
    NodeCounts out{Combination(nodes_.size()), {}};
    for (const auto& interest : ad.interests) {
      if (!overrides_.contains(interest) && tokenize(interest).empty()) {
        out.skipped.push_back(interest);
        continue;
      }
      const auto node = classify(interest);
      const auto slot = static_cast<std::size_t>(
          std::find(nodes_.begin(), nodes_.end(), node) - nodes_.begin());
      ++out.counts[slot];
    }
    return out;
  }

 private:
  std::vector<std::shared_ptr<const SimilarityModel>> models_;
  std::vector<ConceptNode> nodes_;
  std::map<std::string, ConceptNode, std::less<>> overrides_;
};

// Scrape a corpus for `node` from `root` and build its scorer.
inline std::shared_ptr<const ConceptScorer> build_scorer(ArticleSource& source, ConceptNode node,
                                                         const ScrapeParams& params) {
  CachingSource cached(source);
  const auto titles = collect_titles(cached, params);
  return std::make_shared<const ConceptScorer>(node, build_corpus(cached, titles.titles));
}

}  // namespace ocnc::concepts
