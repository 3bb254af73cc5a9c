#ifndef MSHMM_DATES_HPP
#define MSHMM_DATES_HPP

#include <cstdint>
#include <cstdio>
#include <string>

#include "mshmm/errors.hpp"

namespace mshmm {

// Calendar dates are days since 1970-01-01 (proleptic Gregorian).
using Date = std::int64_t;

// Howard Hinnant's civil-calendar algorithms.
constexpr Date days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097LL + static_cast<int>(doe) - 719468;
}

struct CivilDate {
  int year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(Date z) {
  z += 719468;
  const Date era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {y + (m <= 2), m, d};
}

// Strict ISO-8601 calendar date, "YYYY-MM-DD".
inline Date parse_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw DataError("malformed date '" + s + "' (expected YYYY-MM-DD)");
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (s[i] < '0' || s[i] > '9')
      throw DataError("malformed date '" + s + "' (expected YYYY-MM-DD)");
  const int y = std::stoi(s.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(s.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(s.substr(8, 2)));
  if (m < 1 || m > 12 || d < 1 || d > 31)
    throw DataError("out-of-range date '" + s + "'");
  const Date days = days_from_civil(y, m, d);
  const CivilDate back = civil_from_days(days);
  if (back.year != y || back.month != m || back.day != d)
    throw DataError("invalid calendar date '" + s + "'");
  return days;
}

inline std::string format_iso_date(Date days) {
  const CivilDate c = civil_from_days(days);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
  return buf;
}

}  // namespace mshmm

#endif
