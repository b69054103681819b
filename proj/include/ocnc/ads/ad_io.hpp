#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ocnc/ads/advertisement.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/text.hpp"

namespace ocnc::ads {

inline constexpr std::array<std::string_view, 6> kAdColumns = {
    "id", "clicks", "spend", "start_date", "end_date", "interests"};

// Reads the ad table: header `id,clicks,spend,start_date,end_date,interests`
// (columns may appear in any order, extra columns are ignored). Interests are
// ';'-separated and trimmed; empty pieces are dropped. Empty date cells are
// absent dates.
//
// Throws FormatError naming the first missing column, or RowError carrying the
// 1-based data row index of the first invalid row.
inline std::vector<Advertisement> parse_ads(std::istream& in) {
  const auto table = text::read_csv(in);
  if (table.empty()) throw FormatError("missing header row");

  std::array<std::size_t, kAdColumns.size()> col{};
  const auto& header = table.front();
  for (std::size_t c = 0; c < kAdColumns.size(); ++c) {
    std::size_t found = header.size();
    for (std::size_t h = 0; h < header.size(); ++h)
      if (text::trim(header[h]) == kAdColumns[c]) {
        found = h;
        break;
      }
    if (found == header.size())
      throw FormatError("missing column '" + std::string(kAdColumns[c]) + "'");
    col[c] = found;
  }

  std::vector<Advertisement> ads;
  ads.reserve(table.size() - 1);
  for (std::size_t r = 1; r < table.size(); ++r) {
    const auto& cells = table[r];
    auto cell = [&](std::size_t c) -> std::string_view {
      return col[c] < cells.size() ? std::string_view(cells[col[c]]) : std::string_view{};
    };

    Advertisement ad;
    ad.id = std::string(text::trim(cell(0)));

    const auto clicks = text::parse_int(text::trim(cell(1)));
    if (!clicks) throw RowError(r, "clicks is not an integer: '" + std::string(cell(1)) + "'");
    if (*clicks < 0) throw RowError(r, "negative clicks");
    ad.clicks = static_cast<std::uint64_t>(*clicks);

    const auto spend = text::parse_double(text::trim(cell(2)));
    if (!spend) throw RowError(r, "spend is not a number: '" + std::string(cell(2)) + "'");
    if (*spend < 0.0) throw RowError(r, "negative spend");
    ad.spend = *spend;

    for (std::size_t c : {3u, 4u}) {
      const auto raw = text::trim(cell(c));
      if (raw.empty()) continue;
      auto d = Date::parse(raw);
      if (!d) throw RowError(r, "bad date '" + std::string(raw) + "'");
      (c == 3 ? ad.start_date : ad.end_date) = d;
    }

    const auto interests = text::trim(cell(5));
    if (!interests.empty())
      for (const auto& piece : text::split(interests, ';')) {
        const auto t = text::trim(piece);
        if (!t.empty()) ad.interests.emplace_back(t);
      }

    if (auto why = validate(ad); !why.empty()) throw RowError(r, why);
    ads.push_back(std::move(ad));
  }
  return ads;
}

inline std::vector<Advertisement> parse_ads(const std::string& content) {
  std::istringstream in(content);
  return parse_ads(in);
}

// Canonical serialization; parse_ads(write_ads(x)) == x for valid ads.
inline void write_ads(std::ostream& out, std::span<const Advertisement> ads) {
  text::write_csv_row(out, {kAdColumns.begin(), kAdColumns.end()});
  for (const auto& ad : ads) {
    std::string interests;
    for (std::size_t i = 0; i < ad.interests.size(); ++i) {
      if (i) interests += ';';
      interests += ad.interests[i];
    }
    text::write_csv_row(out, {ad.id, std::to_string(ad.clicks), text::format_double(ad.spend),
                              ad.start_date ? ad.start_date->to_string() : "",
                              ad.end_date ? ad.end_date->to_string() : "", interests});
  }
}

}  // namespace ocnc::ads
