#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ocnc/concepts/article_source.hpp"
#include "ocnc/core/error.hpp"

namespace ocnc::concepts {

struct ScrapeParams {
  std::string root_title;
  std::size_t depth = 0;
};

struct TitleCollection {
  std::vector<std::string> titles;   // first-visit order, no duplicates
  std::vector<std::string> skipped;  // linked titles the source could not resolve
  std::size_t max_out_degree = 0;    // largest link count among expanded articles
};

/// Depth-limited collection of article titles starting at `params.root_title`.
///
/// Every title within `depth` link hops of the root is collected once. Titles
/// are visited level by level, and within a level in the document order of the
/// links that reached them; one visited set is shared by the whole traversal, so
/// cycles and repeated links are harmless. As a consequence the result for depth
/// d is a prefix of the result for depth d + 1.
///
/// Every collected title has been fetched successfully. Links that do not resolve
/// are reported in `skipped`; an unresolvable root throws NotFoundError.
inline TitleCollection collect_titles(ArticleSource& source, const ScrapeParams& params) {
  auto root = source.fetch(params.root_title);
  if (!root) throw NotFoundError(params.root_title);

  TitleCollection out;
  std::set<std::string> visited{params.root_title};
  std::set<std::string> missing;
  out.titles.push_back(params.root_title);

  // (article, remaining depth)
  std::deque<std::pair<Article, std::size_t>> frontier;
  frontier.emplace_back(std::move(*root), params.depth);
  while (!frontier.empty()) {
    auto [article, remaining] = std::move(frontier.front());
    frontier.pop_front();
    if (remaining == 0) continue;
    out.max_out_degree = std::max(out.max_out_degree, article.links.size());
    for (const auto& link : article.links) {
      if (visited.contains(link) || missing.contains(link)) continue;
      auto next = source.fetch(link);
      if (!next) {
        missing.insert(link);
        out.skipped.push_back(link);
        continue;
      }
      visited.insert(link);
      out.titles.push_back(link);
      frontier.emplace_back(std::move(*next), remaining - 1);
    }
  }
  return out;
}

// Article texts in the given order joined by single newlines.
inline std::string build_corpus(ArticleSource& source, const std::vector<std::string>& titles) {
  std::string corpus;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    auto a = source.fetch(titles[i]);
    if (!a) throw NotFoundError(titles[i]);
    if (i) corpus += '\n';
    corpus += a->text;
  }
  return corpus;
}

}  // namespace ocnc::concepts
