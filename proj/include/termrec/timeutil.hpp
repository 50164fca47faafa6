#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

namespace termrec {

// UTC instant with second resolution. Total order, exact round trip through
// the ISO-8601 text form ("2014-03-01T10:05:00Z").
struct Timestamp {
    std::int64_t sec = 0; // seconds since Unix epoch

    auto operator<=>(const Timestamp&) const = default;
};

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Accepts "YYYY-MM-DDTHH:MM:SSZ" or the date-only short form "YYYY-MM-DD"
// (midnight UTC). Throws DataError on anything else.
Timestamp parse_timestamp(std::string_view text);

// Always emits the full "YYYY-MM-DDTHH:MM:SSZ" form.
std::string format_timestamp(Timestamp t);

} // namespace termrec
