#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocnc/core/text.hpp"

namespace ocnc::ads {

/// Calendar date (proleptic Gregorian), stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days d) : days_(d.time_since_epoch().count()) {}
  constexpr Date(int y, unsigned m, unsigned d)
      : Date(std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}}) {}

  // Strict YYYY-MM-DD; returns nullopt for anything else or an impossible date.
  static std::optional<Date> parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = text::parse_int(s.substr(0, 4));
    auto m = text::parse_int(s.substr(5, 2));
    auto d = text::parse_int(s.substr(8, 2));
    if (!y || !m || !d || *y < 0 || *m < 1 || *d < 1) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                          std::chrono::month{static_cast<unsigned>(*m)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(std::chrono::sys_days{ymd});
  }

  std::string to_string() const {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  constexpr std::int64_t days_since_epoch() const noexcept { return days_; }
  constexpr Date plus_days(std::int64_t n) const noexcept {
    Date d;
    d.days_ = days_ + n;
    return d;
  }

  friend constexpr auto operator<=>(Date, Date) = default;
  friend constexpr std::int64_t operator-(Date a, Date b) noexcept { return a.days_ - b.days_; }

 private:
  std::int64_t days_ = 0;
};

/// One advertisement record.
///
/// Invariants (checked by validate()): id has no surrounding whitespace; spend
/// is finite and >= 0; when both dates are present end_date >= start_date; each
/// interest is non-empty, trimmed, and free of ';' (the file's list separator).
struct Advertisement {
  std::string id;
  std::uint64_t clicks = 0;
  double spend = 0.0;  // rubles, never converted
  std::optional<Date> start_date;
  std::optional<Date> end_date;
  std::vector<std::string> interests;

  friend bool operator==(const Advertisement&, const Advertisement&) = default;
};

// Empty string when valid, otherwise the reason.
inline std::string validate(const Advertisement& ad) {
  if (text::trim(ad.id).size() != ad.id.size()) return "id has surrounding whitespace";
  if (!(ad.spend >= 0.0) || !std::isfinite(ad.spend)) return "spend must be a finite non-negative number";
  if (ad.start_date && ad.end_date && *ad.end_date < *ad.start_date)
    return "end_date precedes start_date";
  for (const auto& interest : ad.interests) {
    if (interest.empty()) return "empty interest";
    if (interest.find(';') != std::string::npos) return "interest contains ';'";
    if (text::trim(interest).size() != interest.size()) return "interest has surrounding whitespace";
  }
  return {};
}

// Whole days between start and end; absent unless both dates are present.
inline std::optional<std::int64_t> days_online(const Advertisement& ad) {
  if (!ad.start_date || !ad.end_date) return std::nullopt;
  return *ad.end_date - *ad.start_date;
}

}  // namespace ocnc::ads
