#include "termrec/timeutil.hpp"

#include <array>
#include <cstdio>

#include "termrec/errors.hpp"

namespace termrec {
namespace {

// Civil-date <-> day-count conversions (proleptic Gregorian, era algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool is_digits(std::string_view s) {
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return !s.empty();
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

bool days_in_month_ok(int y, int m, int d) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    int len = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) len = 29;
    return d <= len;
}

[[noreturn]] void bad(std::string_view text) {
    throw DataError("bad timestamp: '" + std::string(text) + "'");
}

} // namespace

Timestamp parse_timestamp(std::string_view text) {
    if (text.size() != 10 && text.size() != 20) bad(text);
    if (text.size() == 20 && (text[10] != 'T' || text[19] != 'Z')) bad(text);
    if (text[4] != '-' || text[7] != '-') bad(text);

    const auto ys = text.substr(0, 4), ms = text.substr(5, 2), ds = text.substr(8, 2);
    if (!is_digits(ys) || !is_digits(ms) || !is_digits(ds)) bad(text);
    const int y = to_int(ys), mo = to_int(ms), d = to_int(ds);
    if (!days_in_month_ok(y, mo, d)) bad(text);

    int hh = 0, mi = 0, ss = 0;
    if (text.size() == 20) {
        if (text[13] != ':' || text[16] != ':') bad(text);
        const auto hs = text.substr(11, 2), mis = text.substr(14, 2), sss = text.substr(17, 2);
        if (!is_digits(hs) || !is_digits(mis) || !is_digits(sss)) bad(text);
        hh = to_int(hs);
        mi = to_int(mis);
        ss = to_int(sss);
        if (hh > 23 || mi > 59 || ss > 59) bad(text);
    }

    return Timestamp{days_from_civil(y, mo, d) * kSecondsPerDay + hh * 3600 + mi * 60 + ss};
}

std::string format_timestamp(Timestamp t) {
    std::int64_t days = t.sec / kSecondsPerDay;
    std::int64_t rem = t.sec % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

} // namespace termrec
