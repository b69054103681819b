#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ocnc/core/concept_node.hpp"
#include "ocnc/core/error.hpp"

namespace ocnc::concepts {

// Lowercases ASCII letters, keeps ASCII digits and non-ASCII bytes (UTF-8
// letters), turns everything else into a separator, splits on separators.
inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') {
      cur += static_cast<char>(c - 'A' + 'a');
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      cur += ch;
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

inline constexpr char kWordStart = '<';
inline constexpr char kWordEnd = '>';

// Character 3-grams of the token wrapped in start/end sentinels: "a" -> {"<a>"}.
inline std::vector<std::string> char_trigrams(std::string_view token) {
  std::string padded;
  padded.reserve(token.size() + 2);
  padded += kWordStart;
  padded += token;
  padded += kWordEnd;
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) out.emplace_back(padded.substr(i, 3));
  return out;
}

/// Scores how strongly a phrase belongs to one concept. Implementations must be
/// immutable after construction so scoring is safe from several threads.
class SimilarityModel {
 public:
  virtual ~SimilarityModel() = default;
  virtual ConceptNode concept_node() const = 0;
  // Higher is more similar. Throws InvalidArgument if the phrase has no tokens.
  virtual double similarity(std::string_view phrase) const = 0;
};

/// Corpus likelihood scorer: add-one smoothed unigram model with a character
/// trigram model as backoff for out-of-vocabulary tokens.
///
/// similarity(p) is the mean per-token log-probability. A token seen in the
/// corpus scores log((c + 1) / (N + V)) with N the token count and V the
/// vocabulary size. An unseen token scores the mean of log((g + 1) / (T + W))
/// over its padded trigrams, T and W being the trigram total and vocabulary.
class ConceptScorer final : public SimilarityModel {
 public:
  ConceptScorer(ConceptNode node, std::string_view corpus) : node_(node) {
    for (auto& tok : tokenize(corpus)) {
      for (auto& g : char_trigrams(tok)) {
        ++trigrams_[g];
        ++trigram_total_;
      }
      ++unigrams_[std::move(tok)];
      ++unigram_total_;
    }
    if (unigram_total_ == 0)
      throw InvalidArgument("corpus for '" + std::string(name_of(node)) + "' has no tokens");
  }

  ConceptNode concept_node() const override { return node_; }

  std::uint64_t unigram_count(std::string_view token) const {
    auto it = unigrams_.find(std::string(token));
    return it == unigrams_.end() ? 0 : it->second;
  }
  std::uint64_t trigram_count(std::string_view gram) const {
    auto it = trigrams_.find(std::string(gram));
    return it == trigrams_.end() ? 0 : it->second;
  }
  std::size_t unigram_vocabulary() const noexcept { return unigrams_.size(); }
  std::size_t trigram_vocabulary() const noexcept { return trigrams_.size(); }
  std::uint64_t unigram_total() const noexcept { return unigram_total_; }
  std::uint64_t trigram_total() const noexcept { return trigram_total_; }

  double token_log_probability(std::string_view token) const {
    if (const auto c = unigram_count(token); c > 0)
      return std::log(static_cast<double>(c + 1) /
                      static_cast<double>(unigram_total_ + unigrams_.size()));
    const auto grams = char_trigrams(token);
    const double denom = static_cast<double>(trigram_total_ + trigrams_.size());
    double sum = 0.0;
    for (const auto& g : grams) sum += std::log(static_cast<double>(trigram_count(g) + 1) / denom);
    return sum / static_cast<double>(grams.size());
  }

  double similarity(std::string_view phrase) const override {
    const auto tokens = tokenize(phrase);
    if (tokens.empty()) throw InvalidArgument("phrase '" + std::string(phrase) + "' has no tokens");
    double sum = 0.0;
    for (const auto& t : tokens) sum += token_log_probability(t);
    return sum / static_cast<double>(tokens.size());
  }

 private:
  ConceptNode node_;
  std::unordered_map<std::string, std::uint64_t> unigrams_;
  std::unordered_map<std::string, std::uint64_t> trigrams_;
  std::uint64_t unigram_total_ = 0;
  std::uint64_t trigram_total_ = 0;
};

}  // namespace ocnc::concepts
