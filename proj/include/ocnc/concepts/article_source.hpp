#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocnc/core/error.hpp"
#include "ocnc/core/text.hpp"

namespace ocnc::concepts {

struct Article {
  std::string text;
  std::vector<std::string> links;  // document order
};

/// Resolves an article title to its text and out-links.
class ArticleSource {
 public:
  virtual ~ArticleSource() = default;
  // nullopt when the title does not exist in the source.
  virtual std::optional<Article> fetch(const std::string& title) = 0;
};

class InMemorySource final : public ArticleSource {
 public:
  InMemorySource() = default;
  explicit InMemorySource(std::map<std::string, Article> articles) : articles_(std::move(articles)) {}

  void add(std::string title, Article a) { articles_[std::move(title)] = std::move(a); }

  std::optional<Article> fetch(const std::string& title) override {
    ++fetches_;
    auto it = articles_.find(title);
    if (it == articles_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t fetch_count() const noexcept { return fetches_; }

 private:
  std::map<std::string, Article> articles_;
  std::size_t fetches_ = 0;
};

// File name for a title: bytes outside [A-Za-z0-9 _.,()'-] are %XX-escaped, then
// ".txt" is appended. A leading '.' is escaped too so no title maps to a hidden file.
inline std::string fixture_file_name(std::string_view title) {
  std::string out;
  for (std::size_t i = 0; i < title.size(); ++i) {
    const auto c = static_cast<unsigned char>(title[i]);
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       c == ' ' || c == '_' || c == ',' || c == '(' || c == ')' || c == '\'' ||
                       c == '-' || (c == '.' && i > 0);
    if (plain) {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out + ".txt";
}

// Fixture layout: first line `LINKS: t1|t2|...` (may be empty after the colon),
// everything after the first newline is the article text.
inline Article parse_fixture(std::string_view content) {
  const auto nl = content.find('\n');
  auto first = content.substr(0, nl);
  if (!first.empty() && first.back() == '\r') first.remove_suffix(1);
  constexpr std::string_view tag = "LINKS:";
  if (first.substr(0, tag.size()) != tag) throw FormatError("fixture article must start with 'LINKS:'");
  Article a;
  const auto links = text::trim(first.substr(tag.size()));
  if (!links.empty())
    for (const auto& l : text::split(links, '|')) {
      const auto t = text::trim(l);
      if (!t.empty()) a.links.emplace_back(t);
    }
  if (nl != std::string_view::npos) a.text = std::string(content.substr(nl + 1));
  while (!a.text.empty() && (a.text.back() == '\n' || a.text.back() == '\r')) a.text.pop_back();
  return a;
}

inline std::string format_fixture(const Article& a) {
  std::string out = "LINKS: ";
  for (std::size_t i = 0; i < a.links.size(); ++i) {
    if (i) out += '|';
    out += a.links[i];
  }
  return out + "\n" + a.text + "\n";
}

/// Local directory of fixture articles, one file per title.
class FixtureSource final : public ArticleSource {
 public:
  explicit FixtureSource(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_))
      throw NotFoundError("fixture directory " + dir_.string());
  }

  std::optional<Article> fetch(const std::string& title) override {
    const auto path = dir_ / fixture_file_name(title);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      return parse_fixture(ss.str());
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }

  void write(const std::string& title, const Article& a) const {
    std::ofstream out(dir_ / fixture_file_name(title), std::ios::binary);
    out << format_fixture(a);
  }

 private:
  std::filesystem::path dir_;
};

/// Memoizes another source so that collecting titles and building the corpus
/// fetch each article once.
class CachingSource final : public ArticleSource {
 public:
  explicit CachingSource(ArticleSource& inner) : inner_(inner) {}

  std::optional<Article> fetch(const std::string& title) override {
    auto it = cache_.find(title);
    if (it == cache_.end()) it = cache_.emplace(title, inner_.fetch(title)).first;
    return it->second;
  }

 private:
  ArticleSource& inner_;
  std::map<std::string, std::optional<Article>> cache_;
};

}  // namespace ocnc::concepts
